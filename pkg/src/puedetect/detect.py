"""PU-versus-attacker hypothesis tests and their analytic error bounds."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidityError


class Hypothesis(enum.Enum):
    H0_PU = 0
    H1_ATTACKER = 1

    @classmethod
    def from_flag(cls, is_attacker) -> Hypothesis:
        return cls.H1_ATTACKER if is_attacker else cls.H0_PU


@dataclass(frozen=True)
class NaiveTestInput:
    d_i: np.ndarray
    d_i_fc: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d_i, dtype=float)
        f = np.asarray(self.d_i_fc, dtype=float)
        if d.shape != f.shape:
            raise ValidityError("d_i and d_i_fc must have equal length")
        if d.size < 2:
            raise ValidityError("the interval test needs at least two CRs")
        if np.any(d <= 0) or np.any(f <= 0):
            raise ValidityError("distances must be positive")
        object.__setattr__(self, "d_i", d)
        object.__setattr__(self, "d_i_fc", f)


@dataclass(frozen=True)
class BoundParams:
    n: int
    r_crn: float
    ratio_r: float = 1.0
    f_db: float = 0.0
    gamma_coeff: float = 31.8
    threshold_t: float = 0.0
    eps_prime: float = 0.0

    def __post_init__(self):
        if self.n < 1 or not self.r_crn > 0 or self.ratio_r < 1 or self.threshold_t < 0:
            raise ValidityError(f"invalid bound parameters: {self}")


def interval_is_empty(d_i, d_i_fc, rtol: float = 1e-9) -> bool:
    """True when the feasible band for the transmitter-FC distance is empty.

    The band is ``[max |d_j - d_j,fc|, min (d_i + d_i,fc)]``. ``rtol`` absorbs
    round-off for exactly collinear geometries.
    """
    upper = np.min(d_i + d_i_fc)
    lower = np.max(np.abs(d_i - d_i_fc))
    return bool(upper < lower - rtol * upper)


def naive_interval_test(inp: NaiveTestInput, rtol: float = 1e-9) -> Hypothesis:
    return Hypothesis.from_flag(interval_is_empty(inp.d_i, inp.d_i_fc, rtol))


def _ring_fraction(r_crn: float, width: float) -> float:
    """Area fraction of the outer ring of given width inside a disc of radius r_crn."""
    return 1.0 - ((r_crn - width) / r_crn) ** 2


def naive_detection_rate_bound(params: BoundParams, max_dfc_sum: float) -> float:
    """Lower bound on the interval test's detection rate under free-space propagation."""
    width = max_dfc_sum / math.sqrt(params.ratio_r)
    if width > params.r_crn * (1 + 1e-12):
        raise ValidityError(
            f"bound needs max_dfc_sum/sqrt(R) <= r_crn ({width:.6g} > {params.r_crn:.6g})")
    width = min(width, params.r_crn)
    bound = 1.0 - _ring_fraction(params.r_crn, width) ** params.n
    return min(max(bound, 0.0), 1.0)


def spread(estimates) -> float:
    d = [e.est_distance for e in estimates] if not isinstance(estimates, np.ndarray) else estimates
    return float(np.max(d) - np.min(d))


def rss_threshold_test(estimates, threshold_t: float) -> Hypothesis:
    """H0 iff the spread of group distance estimates is at most ``threshold_t``."""
    if len(estimates) < 2:
        raise ValidityError("the threshold test needs at least two group estimates")
    if threshold_t < 0:
        raise ValidityError("threshold must be non-negative")
    return Hypothesis.from_flag(spread(estimates) > threshold_t)


def fn_probability_bound(params: BoundParams) -> float:
    """Upper bound on Pr(H0 | H1) for the spread test."""
    width = params.threshold_t / 10.0 ** ((params.f_db + params.eps_prime) / params.gamma_coeff)
    if width > params.r_crn:
        return 1.0
    return _ring_fraction(params.r_crn, width) ** params.n


def fp_probability_bound(params: BoundParams) -> float:
    """Advisory bound on Pr(H1 | H0) for the spread test.

    The printed expression subtracts a length from the angle alpha; the length
    is taken in units of r_crn here. Only the zero branch is exact.
    """
    width = params.threshold_t / 10.0 ** (params.eps_prime / params.gamma_coeff)
    if width >= 2 * params.r_crn:
        return 0.0
    alpha = math.acos((params.r_crn - width) / params.r_crn)
    base = max((alpha - width / params.r_crn) / math.pi, 0.0)
    return min(max(1.0 - base ** params.n, 0.0), 1.0)
