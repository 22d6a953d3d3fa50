"""Path-loss models: free-space (Friis) and log-distance with log-normal shadowing.

Conventions: the free-space functions work in watts; the log-distance model
works in dB/dBm with distance in meters and a 1 m reference distance, so the
intercept ``c`` is the loss at 1 m and ``gamma_coeff`` is dB per decade.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidityError

SPEED_OF_LIGHT = 299_792_458.0


def watts_to_dbm(p):
    return 10.0 * np.log10(p) + 30.0


def dbm_to_watts(p_dbm):
    return 10.0 ** ((np.asarray(p_dbm, dtype=float) - 30.0) / 10.0)


def dbw_to_dbm(p_dbw):
    return p_dbw + 30.0


@dataclass(frozen=True)
class FsplModel:
    wavelength: float
    antenna_product: float = 1.0

    def __post_init__(self):
        if not (self.wavelength > 0 and self.antenna_product > 0):
            raise ValidityError("wavelength and antenna_product must be positive")

    @classmethod
    def from_frequency(cls, freq_hz: float, antenna_product: float = 1.0) -> FsplModel:
        return cls(SPEED_OF_LIGHT / freq_hz, antenna_product)

    @property
    def m(self) -> float:
        """Distance constant with ``d = m * sqrt(p_t / p_r)``."""
        return math.sqrt(self.antenna_product * self.wavelength ** 2 / (4 * math.pi) ** 2)


@dataclass(frozen=True)
class LogShadowModel:
    c: float
    gamma_coeff: float
    shadow_sigma: float = 0.0

    def __post_init__(self):
        if not self.gamma_coeff > 0:
            raise ValidityError(f"gamma_coeff must be positive, got {self.gamma_coeff}")
        if not self.shadow_sigma >= 0:
            raise ValidityError(f"shadow_sigma must be non-negative, got {self.shadow_sigma}")

    def mean_loss(self, d):
        return self.c + self.gamma_coeff * np.log10(d)


@dataclass(frozen=True)
class ModelErrors:
    """Mis-estimation of the log-distance model, ``est - best``.

    ``eps_c``/``eps_gamma`` are fixed offsets; the sigmas scale a fresh
    standard-normal draw per realization.
    """

    eps_c: float = 0.0
    eps_gamma: float = 0.0
    sigma_eps_c: float = 0.0
    sigma_eps_gamma: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.eps_c) and math.isfinite(self.eps_gamma)):
            raise ValidityError("model error offsets must be finite")
        if self.sigma_eps_c < 0 or self.sigma_eps_gamma < 0:
            raise ValidityError("model error sigmas must be non-negative")

    def draw(self, rng: np.random.Generator) -> tuple[float, float]:
        z = rng.standard_normal(2)
        return (self.eps_c + self.sigma_eps_c * z[0],
                self.eps_gamma + self.sigma_eps_gamma * z[1])

    def apply(self, best: LogShadowModel, eps_c: float, eps_gamma: float) -> LogShadowModel:
        return LogShadowModel(best.c + eps_c, best.gamma_coeff + eps_gamma, best.shadow_sigma)


@dataclass(frozen=True)
class TransmitterProfile:
    p_pu: float
    p_attacker: float

    def __post_init__(self):
        if not self.p_pu > self.p_attacker:
            raise ValidityError("PU power must exceed attacker power")

    @property
    def f_db(self) -> float:
        return self.p_pu - self.p_attacker

    @property
    def ratio(self) -> float:
        return 10.0 ** (self.f_db / 10.0)


def _check_positive(name, value):
    if np.any(np.asarray(value) <= 0):
        raise ValidityError(f"{name} must be positive")


def fspl_received_power(p_t, d, model: FsplModel):
    _check_positive("distance", d)
    _check_positive("transmit power", p_t)
    d = np.asarray(d, dtype=float)
    return p_t * model.antenna_product * model.wavelength ** 2 / (4 * np.pi * d) ** 2


def ideal_distance_estimate(p_assumed, p_r, model: FsplModel):
    """Invert the free-space model for distance, assuming transmit power ``p_assumed``."""
    _check_positive("received power", p_r)
    _check_positive("assumed power", p_assumed)
    return model.m * np.sqrt(np.asarray(p_assumed, dtype=float) / p_r)


def lognormal_path_loss(d, model: LogShadowModel, rng: np.random.Generator | None = None):
    _check_positive("distance", d)
    d = np.asarray(d, dtype=float)
    loss = model.mean_loss(d)
    if rng is not None:
        loss = loss + model.shadow_sigma * rng.standard_normal(d.shape)
    elif model.shadow_sigma > 0:
        raise ValueError("an rng is required when shadow_sigma > 0")
    return loss if loss.ndim else float(loss)


def estimated_distance_under_error(l_avg, model_est: LogShadowModel):
    """Distance implied by an averaged loss under the (possibly wrong) model."""
    return 10.0 ** ((np.asarray(l_avg, dtype=float) - model_est.c) / model_est.gamma_coeff)


HATA_FREQ_RANGE = (150.0, 1500.0)
HATA_TX_HEIGHT_RANGE = (30.0, 300.0)
HATA_RX_HEIGHT_RANGE = (1.0, 10.0)


def make_hata_urban_model(freq_mhz: float, h_t: float, h_r: float,
                          shadow_sigma: float = 0.0) -> LogShadowModel:
    """Okumura-Hata urban loss (small/medium city mobile-antenna correction)
    re-expressed against distance in meters.
    """
    for value, (lo, hi), name in ((freq_mhz, HATA_FREQ_RANGE, "freq_mhz"),
                                  (h_t, HATA_TX_HEIGHT_RANGE, "h_t"),
                                  (h_r, HATA_RX_HEIGHT_RANGE, "h_r")):
        if not lo <= value <= hi:
            raise ValidityError(f"{name}={value} outside Hata validity [{lo}, {hi}]")
    lf = math.log10(freq_mhz)
    a_hr = (1.1 * lf - 0.7) * h_r - (1.56 * lf - 0.8)
    gamma = 44.9 - 6.55 * math.log10(h_t)
    loss_at_1km = 69.55 + 26.16 * lf - 13.82 * math.log10(h_t) - a_hr
    # log10(d_km) = log10(d_m) - 3
    return LogShadowModel(c=loss_at_1km - 3.0 * gamma, gamma_coeff=gamma,
                          shadow_sigma=shadow_sigma)
