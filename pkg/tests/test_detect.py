import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from puedetect.detect import (BoundParams, Hypothesis, NaiveTestInput, fn_probability_bound,
                              fp_probability_bound, naive_detection_rate_bound,
                              naive_interval_test, rss_threshold_test)
from puedetect.errors import ValidityError
from puedetect.propagation import FsplModel, fspl_received_power, ideal_distance_estimate
from puedetect.sensing import GroupEstimate
from puedetect.topology import sample_disc

H0, H1 = Hypothesis.H0_PU, Hypothesis.H1_ATTACKER


def test_naive_examples():
    assert naive_interval_test(NaiveTestInput([100.0, 100.0], [1.0, 1.0])) is H0
    assert naive_interval_test(NaiveTestInput([1000.0, 10.0], [1.0, 1.0])) is H1


def test_naive_input_validation():
    with pytest.raises(ValidityError):
        NaiveTestInput([1.0, 2.0], [1.0])
    with pytest.raises(ValidityError):
        NaiveTestInput([1.0], [1.0])


def test_naive_never_flags_noiseless_pu(rng):
    fspl = FsplModel.from_frequency(593e6)
    for _ in range(500):
        crs = sample_disc(6, 500.0, rng)
        pu = rng.uniform(-3000, 3000, 2)
        d = np.hypot(*(crs - pu).T)
        d_i = ideal_distance_estimate(100.0, fspl_received_power(100.0, d, fspl), fspl)
        assert naive_interval_test(NaiveTestInput(d_i, np.hypot(*crs.T))) is H0


def test_naive_collinear_roundoff_is_tolerated():
    # PU 1000 m from the FC, CRs on the same line on either side of the FC:
    # the band collapses to the single point 1000 m
    d_fc = np.array([100.0, 300.0])
    d = np.array([900.0, 1300.0]) * (1 + 1e-15)
    upper, lower = np.min(d + d_fc), np.max(np.abs(d - d_fc))
    assert upper < lower  # exact comparison would call this an attack
    assert naive_interval_test(NaiveTestInput(d, d_fc)) is H0
    assert naive_interval_test(NaiveTestInput(d, d_fc), rtol=0.0) is H1


def ests(*d):
    return [GroupEstimate(i, 0.0, float(x), 1) for i, x in enumerate(d)]


def test_rss_examples():
    assert rss_threshold_test(ests(250.0, 250.0, 250.0), 0.0) is H0
    assert rss_threshold_test(ests(100.0, 400.0), 200.0) is H1
    assert rss_threshold_test(ests(100.0, 300.0), 200.0) is H0  # tie goes to H0


def test_rss_attacker_at_center_inflated_spread():
    # CR distances to the attacker spread over 400 m, F = 30 dB, slope 31.8
    factor = 10 ** (30 / 31.8)
    spread = 400 * factor
    assert spread == pytest.approx(3508, rel=1e-3)
    assert rss_threshold_test(ests(50 * factor, 450 * factor), 1000.0) is H1


def test_rss_needs_two_estimates():
    with pytest.raises(ValidityError):
        rss_threshold_test(ests(1.0), 10.0)


@given(st.lists(st.floats(0.1, 1e5), min_size=2, max_size=12), st.floats(0, 1e5), st.floats(0, 1e5))
def test_rss_monotone_in_threshold(d, t1, t2):
    lo, hi = sorted((t1, t2))
    if rss_threshold_test(ests(*d), lo) is H0:
        assert rss_threshold_test(ests(*d), hi) is H0


@given(st.lists(st.floats(0.1, 1e5), min_size=2, max_size=12), st.floats(0, 1e5), st.randoms())
def test_tests_permutation_invariant(d, t, r):
    shuffled = list(d)
    r.shuffle(shuffled)
    assert rss_threshold_test(ests(*d), t) is rss_threshold_test(ests(*shuffled), t)
    fc = [x / 3 + 1 for x in d]
    pairs = list(zip(d, fc))
    r.shuffle(pairs)
    a = naive_interval_test(NaiveTestInput(d, fc))
    b = naive_interval_test(NaiveTestInput([p[0] for p in pairs], [p[1] for p in pairs]))
    assert a is b


def test_naive_bound_limits():
    huge = naive_detection_rate_bound(BoundParams(n=3, r_crn=500.0, ratio_r=1e30), 1000.0)
    assert huge == pytest.approx(1.0)
    # width equal to r_crn: ring covers the disc, bound is 0
    assert naive_detection_rate_bound(BoundParams(n=1, r_crn=500.0, ratio_r=4.0), 1000.0) == 0.0


def test_naive_bound_worked_example():
    ring = 1 - ((500 - 1) / 500) ** 2
    assert ring == pytest.approx(3.996e-3)
    value = naive_detection_rate_bound(BoundParams(n=4, r_crn=500.0, ratio_r=1e6), 1000.0)
    assert value == pytest.approx(1 - ring ** 4, rel=1e-15)


def test_naive_bound_validity_condition():
    with pytest.raises(ValidityError):
        naive_detection_rate_bound(BoundParams(n=4, r_crn=500.0, ratio_r=1.0), 1000.0)


def test_fn_bound_branches():
    params = BoundParams(n=4, r_crn=500.0, f_db=30.0, gamma_coeff=31.8, threshold_t=1e5)
    assert fn_probability_bound(params) == 1.0
    assert fn_probability_bound(BoundParams(n=4, r_crn=500.0, f_db=30.0, threshold_t=0.0)) == 0.0


def test_fn_bound_worked_example():
    width = 1000 / 10 ** (30 / 31.8)
    assert width == pytest.approx(114.0, abs=0.1)
    expected = (1 - ((500 - width) / 500) ** 2) ** 4
    assert expected == pytest.approx(0.0267, rel=0.01)
    params = BoundParams(n=4, r_crn=500.0, f_db=30.0, gamma_coeff=31.8, threshold_t=1000.0)
    assert fn_probability_bound(params) == pytest.approx(expected, rel=1e-12)


def test_fn_bound_monotone_in_f_and_n():
    grid = [(n, f) for n in range(1, 12) for f in np.linspace(0, 80, 17)]
    values = {(n, f): fn_probability_bound(BoundParams(n=n, r_crn=500.0, f_db=f, threshold_t=1500.0))
              for n, f in grid}
    for n, f in grid:
        if (n + 1, f) in values:
            assert values[(n + 1, f)] <= values[(n, f)]
        if (n, f + 5.0) in values:
            assert values[(n, f + 5.0)] <= values[(n, f)]


def test_fp_bound_zero_branch():
    assert fp_probability_bound(BoundParams(n=4, r_crn=500.0, threshold_t=5000.0)) == 0.0
    assert fp_probability_bound(BoundParams(n=4, r_crn=500.0, threshold_t=1000.0)) == 0.0


def test_fp_bound_half_diameter():
    # cos(alpha) = 0 -> alpha = pi/2; the length term enters in units of r_crn
    expected = 1 - ((math.pi / 2 - 1) / math.pi) ** 4
    value = fp_probability_bound(BoundParams(n=4, r_crn=500.0, threshold_t=500.0))
    assert value == pytest.approx(expected, rel=1e-12)
    assert 0.0 <= value <= 1.0


def test_bound_params_validation():
    with pytest.raises(ValidityError):
        BoundParams(n=0, r_crn=1.0)
    with pytest.raises(ValidityError):
        BoundParams(n=1, r_crn=1.0, ratio_r=0.5)
