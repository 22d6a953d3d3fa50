"""Experiment descriptions, JSON config I/O and the named presets."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, ValidityError
from .propagation import (FsplModel, LogShadowModel, ModelErrors, TransmitterProfile,
                          make_hata_urban_model, watts_to_dbm)

PROPAGATION_KINDS = ("lognormal", "fspl")


@dataclass(frozen=True)
class BpnnSettings:
    train_trials: int = 2000
    epochs: int = 20
    learning_rate: float = 0.5
    loss: str = "mse"


@dataclass(frozen=True)
class Scenario:
    name: str = "custom"
    n_crs: int = 6
    r_crn: float = 500.0
    field_side: float = 3000.0
    r_neighbor: float = 50.0
    pu_mobility: float = 100.0
    transmitter: TransmitterProfile = TransmitterProfile(80.0, 50.0)
    true_model: LogShadowModel = LogShadowModel(111.76, 31.8, 8.0)
    model_errors: ModelErrors = ModelErrors()
    n_trials: int = 10_000
    seed: int = 20180101
    attacker_fraction: float = 0.5
    eps_prime: float = 0.0
    propagation: str = "lognormal"
    freq_mhz: float = 593.0
    n_sweep: tuple | None = None
    thresholds: tuple | None = None
    bpnn: BpnnSettings = BpnnSettings()

    def __post_init__(self):
        if self.n_trials < 1:
            raise ConfigError("n_trials must be >= 1")
        if not 0.0 <= self.attacker_fraction <= 1.0:
            raise ConfigError("attacker_fraction must lie in [0, 1]")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.n_crs < 1 or not self.r_crn > 0 or self.field_side < 2 * self.r_crn:
            raise ConfigError("need n_crs >= 1, r_crn > 0 and field_side >= 2*r_crn")
        if self.r_neighbor < 0 or self.pu_mobility < 0:
            raise ConfigError("r_neighbor and pu_mobility must be non-negative")
        if self.propagation not in PROPAGATION_KINDS:
            raise ConfigError(f"propagation must be one of {PROPAGATION_KINDS}")

    @property
    def f_db(self) -> float:
        return self.transmitter.f_db

    @property
    def fspl_model(self) -> FsplModel:
        return FsplModel.from_frequency(self.freq_mhz * 1e6)

    def with_(self, **changes) -> Scenario:
        """Copy with top-level or dotted nested fields replaced,
        e.g. ``with_(**{"true_model.shadow_sigma": 0})``."""
        top, nested = {}, {}
        for key, value in changes.items():
            if "." in key:
                head, tail = key.split(".", 1)
                nested.setdefault(head, {})[tail] = value
            else:
                top[key] = value
        for head, sub in nested.items():
            top[head] = dataclasses.replace(top.get(head, getattr(self, head)), **sub)
        return dataclasses.replace(self, **top)

    def with_attacker_gap(self, f_db: float) -> Scenario:
        p_pu = self.transmitter.p_pu
        return self.with_(transmitter=TransmitterProfile(p_pu, p_pu - f_db))

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for key in ("n_sweep", "thresholds"):
            if d[key] is not None:
                d[key] = list(d[key])
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"


_NESTED = {"transmitter": TransmitterProfile, "true_model": LogShadowModel,
           "model_errors": ModelErrors, "bpnn": BpnnSettings}


def scenario_from_dict(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    known = {f.name for f in dataclasses.fields(Scenario)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kwargs = dict(data)
    try:
        for key, cls in _NESTED.items():
            if key in kwargs:
                sub = kwargs[key]
                if not isinstance(sub, dict):
                    raise ConfigError(f"{key} must be an object")
                kwargs[key] = cls(**sub)
        for key in ("n_sweep", "thresholds"):
            if kwargs.get(key) is not None:
                kwargs[key] = tuple(kwargs[key])
        return Scenario(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValidityError) as exc:
        raise ConfigError(str(exc)) from None


def load_scenario(path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    return scenario_from_dict(data)


TABLE3_P_PU_DBM = 80.0  # 50 dBW
USRP_P_PU_DBM = float(watts_to_dbm(345e3))

# attacker power gaps used for the ROC reproductions
ROC_F_VALUES = (20.0, 30.0, 40.0, 60.0)
# (sigma_eps_c, sigma_eps_gamma) settings of the ROC figures
ERROR_GRID = ((0.0, 0.0), (3.0, 1.0), (5.0, 2.0), (10.0, 3.0))


def _table3() -> Scenario:
    return Scenario(
        name="table3-baseline", n_crs=6, r_crn=500.0, field_side=3000.0,
        r_neighbor=50.0, pu_mobility=3000.0 / 30,
        transmitter=TransmitterProfile(TABLE3_P_PU_DBM, TABLE3_P_PU_DBM - 30.0),
        true_model=LogShadowModel(111.76, 31.8, 8.0),
    )


def _fig4() -> Scenario:
    return Scenario(
        name="fig4-naive", n_crs=10, r_crn=500.0, field_side=3000.0, r_neighbor=0.0,
        pu_mobility=0.0, propagation="fspl",
        transmitter=TransmitterProfile(TABLE3_P_PU_DBM, TABLE3_P_PU_DBM - 60.0),
        true_model=LogShadowModel(111.76, 31.8, 0.0),
        n_trials=100_000, n_sweep=tuple(range(1, 11)),
    )


def _usrp() -> Scenario:
    return Scenario(
        name="usrp-emulation", n_crs=6, r_crn=200.0, field_side=3000.0,
        r_neighbor=25.0, pu_mobility=0.0, freq_mhz=593.0,
        transmitter=TransmitterProfile(USRP_P_PU_DBM, USRP_P_PU_DBM - 60.0),
        true_model=make_hata_urban_model(593.0, 278.0, 10.0, shadow_sigma=8.0),
    )


PRESETS = {"table3-baseline": _table3, "fig4-naive": _fig4, "usrp-emulation": _usrp}


def preset_scenario(name: str) -> Scenario:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; available: {sorted(PRESETS)}") from None


def default_thresholds(scenario: Scenario) -> tuple:
    if scenario.thresholds is not None:
        return tuple(float(t) for t in scenario.thresholds)
    # 20 points per decade from 1 m to 1e8 m
    return (0.0,) + tuple(10.0 ** (k / 20) for k in range(0, 161))


def bpnn_thresholds() -> tuple:
    return tuple(round(-1.0 + k / 100, 2) for k in range(201))
