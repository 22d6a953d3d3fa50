"""Command line entry point: ``puedetect {run,preset,bounds,compare,fig4}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiments as ex
from .detect import BoundParams, fn_probability_bound, fp_probability_bound, naive_detection_rate_bound
from .errors import ConfigError, ValidityError
from .scenario import PRESETS, load_scenario, preset_scenario

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _common(p: argparse.ArgumentParser, default_preset: str | None = None):
    p.add_argument("--config", help="scenario JSON file")
    p.add_argument("--preset", default=default_preset, choices=sorted(PRESETS),
                   help="start from a named preset instead of a config file")
    p.add_argument("--seed", type=_u64)
    p.add_argument("--trials", type=_positive_int)
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--workers", type=_positive_int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="puedetect", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="ROC campaign from a config")
    _common(p, "table3-baseline")
    p.add_argument("--detector", choices=("rss", "bpnn", "both"), default="rss")

    p = sub.add_parser("compare", help="spread test vs BPNN baseline")
    _common(p, "table3-baseline")
    p.add_argument("--detector", choices=("rss", "bpnn", "both"), default="both")

    p = sub.add_parser("fig4", help="interval-test accuracy over N (free space)")
    _common(p, "fig4-naive")

    p = sub.add_parser("preset", help="list presets, or emit one as JSON")
    p.add_argument("name", nargs="?")
    p.add_argument("--out")

    p = sub.add_parser("bounds", help="print the analytic detection/error bounds")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--r-crn", type=float, required=True)
    p.add_argument("--f-db", type=float, default=0.0, help="PU-attacker power gap in dB")
    p.add_argument("--gamma", type=float, default=31.8)
    p.add_argument("--threshold", type=float, default=0.0)
    p.add_argument("--eps-prime", type=float, default=0.0)
    p.add_argument("--max-dfc-sum", type=float,
                   help="largest d_i,fc + d_j,fc (default 2*r_crn)")
    return parser


def _scenario(args):
    scenario = load_scenario(args.config) if args.config else preset_scenario(args.preset)
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.trials is not None:
        changes["n_trials"] = args.trials
    return scenario.with_(**changes) if changes else scenario


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_run(args):
    scenario = _scenario(args)
    detector = args.detector if args.verb == "run" else args.detector
    text, aucs = ex.run_campaign(scenario, detector, workers=args.workers)
    _emit(text, args.out)
    for name, auc in aucs.items():
        print(f"# auc scenario={scenario.name} detector={name} value={ex.fmt(auc)}", file=sys.stderr)


def _cmd_fig4(args):
    scenario = _scenario(args)
    ns = scenario.n_sweep or (scenario.n_crs,)
    points = ex.naive_sweep(ns, scenario.r_crn, ex.fig4_ratio(scenario), scenario.n_trials, scenario.seed)
    rows = ["n_crs,accuracy,stderr,n_trials,scenario_id"]
    rows += [f"{p.n_crs},{ex.fmt(p.accuracy)},{ex.fmt(p.stderr)},{p.n_trials},{scenario.name}"
             for p in points]
    _emit("\n".join(rows) + "\n", args.out)


def _cmd_preset(args):
    if not args.name:
        _emit("".join(f"{name}\n" for name in sorted(PRESETS)), args.out)
        return
    _emit(preset_scenario(args.name).to_json(), args.out)


def _cmd_bounds(args):
    ratio = 10.0 ** (args.f_db / 10.0)
    params = BoundParams(n=args.n, r_crn=args.r_crn, ratio_r=ratio, f_db=args.f_db,
                         gamma_coeff=args.gamma, threshold_t=args.threshold,
                         eps_prime=args.eps_prime)
    max_sum = 2 * args.r_crn if args.max_dfc_sum is None else args.max_dfc_sum
    try:
        naive = ex.fmt(naive_detection_rate_bound(params, max_sum))
    except ValidityError as exc:
        naive = f"invalid ({exc})"
    print(json.dumps({
        "naive_detection_rate_lower_bound": naive,
        "fn_probability_upper_bound": ex.fmt(fn_probability_bound(params)),
        "fp_probability_bound": ex.fmt(fp_probability_bound(params)),
    }, indent=2))


COMMANDS = {"run": _cmd_run, "compare": _cmd_run, "fig4": _cmd_fig4,
            "preset": _cmd_preset, "bounds": _cmd_bounds}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.verb](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValidityError, FloatingPointError, OverflowError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
