import json
import subprocess
import sys

import pytest

from puedetect import experiments as ex
from puedetect.cli import main
from puedetect.scenario import preset_scenario


def test_preset_list(capsys):
    assert main(["preset"]) == 0
    assert capsys.readouterr().out.split() == ["fig4-naive", "table3-baseline", "usrp-emulation"]


def test_preset_emit_and_run(tmp_path, capsys):
    cfg = tmp_path / "t3.json"
    assert main(["preset", "table3-baseline", "--out", str(cfg)]) == 0
    assert json.loads(cfg.read_text())["true_model"]["c"] == 111.76
    out = tmp_path / "roc.csv"
    assert main(["run", "--config", str(cfg), "--trials", "300", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ex.CSV_HEADER
    row = lines[1].split(",")
    assert row[3:] == ["300", "table3-baseline", "rss"]
    assert "detector=rss" in capsys.readouterr().err


def test_csv_floats_have_six_significant_digits(tmp_path):
    out = tmp_path / "roc.csv"
    main(["run", "--trials", "200", "--out", str(out)])
    for line in out.read_text().splitlines()[1:]:
        for field in line.split(",")[:3]:
            assert field == f"{float(field):.6g}"


def test_compare_emits_both_detectors(tmp_path):
    s = preset_scenario("table3-baseline").with_(bpnn=preset_scenario("table3-baseline").bpnn.__class__(
        train_trials=100, epochs=3))
    cfg = tmp_path / "c.json"
    cfg.write_text(s.to_json())
    out = tmp_path / "cmp.csv"
    assert main(["compare", "--config", str(cfg), "--trials", "200", "--out", str(out)]) == 0
    detectors = {line.split(",")[-1] for line in out.read_text().splitlines()[1:]}
    assert detectors == {"rss", "bpnn"}
    out2 = tmp_path / "b.csv"
    assert main(["run", "--config", str(cfg), "--trials", "200", "--detector", "bpnn",
                 "--out", str(out2)]) == 0
    assert {l.split(",")[-1] for l in out2.read_text().splitlines()[1:]} == {"bpnn"}


def test_fig4_verb(tmp_path):
    out = tmp_path / "f4.csv"
    assert main(["fig4", "--trials", "2000", "--seed", "3", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n_crs,accuracy,stderr,n_trials,scenario_id"
    assert len(lines) == 11
    assert lines[1].startswith("1,0,")


def test_bounds_verb(capsys):
    assert main(["bounds", "--n", "4", "--r-crn", "500", "--f-db", "30", "--threshold", "1000"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert float(out["fn_probability_upper_bound"]) == pytest.approx(0.0266, rel=0.01)


def test_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n_trials": 0}')
    assert main(["run", "--config", str(bad)]) == 2
    assert main(["run", "--config", str(tmp_path / "nope.json")]) == 2
    with pytest.raises(SystemExit) as err:
        main(["run", "--detector", "nonsense"])
    assert err.value.code == 2


def test_numeric_error_exit_code(tmp_path):
    s = preset_scenario("table3-baseline").with_(attacker_fraction=0.0)
    cfg = tmp_path / "one_class.json"
    cfg.write_text(s.to_json())
    assert main(["run", "--config", str(cfg), "--trials", "50"]) == 3


def test_module_entry_point(tmp_path):
    out = tmp_path / "x.csv"
    proc = subprocess.run([sys.executable, "-m", "puedetect", "run", "--trials", "100",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.read_text().startswith(ex.CSV_HEADER)
