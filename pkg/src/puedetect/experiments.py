"""Monte Carlo campaigns: naive free-space sweeps, spread-test ROC sweeps,
bound checks and the learned-baseline comparison.

Every trial owns a random stream derived from ``(campaign seed, stream,
trial index)``, so results do not depend on chunking, worker count or the
order in which trials run. Thresholds are swept over one shared set of
trials (common random numbers).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bpnn as nn
from . import kernels
from .detect import Hypothesis, rss_threshold_test, spread
from .errors import ValidityError
from .propagation import (FsplModel, dbm_to_watts, fspl_received_power,
                          ideal_distance_estimate)
from .scenario import Scenario, bpnn_thresholds, default_thresholds
from .sensing import group_estimates, measure_all
from .topology import move_pu, sample_disc, sample_topology

STREAM_TRUTH = 0
STREAM_TRIAL = 1
STREAM_TRAIN_TRIAL = 2
STREAM_TRAIN_TRUTH = 3
STREAM_BPNN = 4

CHUNK = 512
NAIVE_RTOL = 1e-9


def trial_seed(seed: int, index: int, stream: int = STREAM_TRIAL) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(stream, index))


def stream_rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def campaign_truths(seed: int, n_trials: int, attacker_fraction: float,
                    stream: int = STREAM_TRUTH) -> np.ndarray:
    return stream_rng(seed, stream).random(n_trials) < attacker_fraction


# --------------------------------------------------------------------------
# single trials

@dataclass(frozen=True)
class World:
    """Everything the FC and the learned baseline see in one trial."""

    topology: object
    received: np.ndarray
    eps_c: float
    eps_gamma: float


def draw_world(scenario: Scenario, is_attacker: bool, rng: np.random.Generator) -> World:
    # error draws come first so that geometry and shadowing are shared
    # across error settings
    eps_c, eps_gamma = scenario.model_errors.draw(rng)
    topo = sample_topology(scenario.n_crs, scenario.r_crn, scenario.field_side, rng)
    topo = move_pu(topo, scenario.pu_mobility, rng)
    tx = scenario.transmitter
    source, p_t = (topo.attacker, tx.p_attacker) if is_attacker else (topo.pu, tx.p_pu)
    received = measure_all(topo, source, p_t, scenario.true_model, rng)
    return World(topo, received, eps_c, eps_gamma)


def estimated_model(scenario: Scenario, world: World):
    est = scenario.model_errors.apply(scenario.true_model, world.eps_c, world.eps_gamma)
    if not est.gamma_coeff > 0:
        raise ValidityError("estimated path-loss slope is not positive")
    return est


@dataclass(frozen=True)
class TrialOutcome:
    truth: Hypothesis
    decision: Hypothesis
    statistic: float


def run_trial(scenario: Scenario, truth: Hypothesis, threshold_t: float,
              trial_seed_) -> TrialOutcome:
    """One trial of the spread test, computed through the reference pipeline."""
    rng = np.random.default_rng(trial_seed_)
    world = draw_world(scenario, truth is Hypothesis.H1_ATTACKER, rng)
    est = group_estimates(world.topology, world.received, scenario.r_neighbor,
                          scenario.transmitter.p_pu, estimated_model(scenario, world))
    decision = rss_threshold_test(est, threshold_t)
    return TrialOutcome(truth, decision, spread(est))


# --------------------------------------------------------------------------
# batched campaigns

@dataclass
class CampaignData:
    truth: np.ndarray      # (T,) bool, True = attacker
    spread: np.ndarray     # (T,) spread of group distance estimates
    xy: np.ndarray         # (T, N, 2) CR positions relative to the FC
    received: np.ndarray   # (T, N) dBm

    @property
    def n_trials(self) -> int:
        return len(self.truth)

    def bpnn_features(self) -> np.ndarray:
        """Per-CR raw features ``(x, y, rss)``, shape (T, N, 3)."""
        return np.concatenate([self.xy, self.received[..., None]], axis=-1)


def _simulate_chunk(args):
    scenario, seed, stream, start, truths = args
    n = len(truths)
    xy = np.empty((n, scenario.n_crs, 2))
    received = np.empty((n, scenario.n_crs))
    c_est = np.empty(n)
    g_est = np.empty(n)
    for k in range(n):
        rng = np.random.default_rng(trial_seed(seed, start + k, stream))
        world = draw_world(scenario, bool(truths[k]), rng)
        est = estimated_model(scenario, world)
        topo = world.topology
        xy[k] = topo.crs - np.asarray(topo.fc)
        received[k] = world.received
        c_est[k] = est.c
        g_est[k] = est.gamma_coeff
    dhat = kernels.group_dhat(received, xy, float(scenario.r_neighbor),
                              float(scenario.transmitter.p_pu), c_est, g_est)
    return dhat.max(axis=1) - dhat.min(axis=1), xy, received


def simulate(scenario: Scenario, n_trials: int | None = None, seed: int | None = None,
             truths=None, workers: int = 1, stream: int = STREAM_TRIAL,
             truth_stream: int = STREAM_TRUTH) -> CampaignData:
    """Run ``n_trials`` spread-test trials and keep the raw per-trial data."""
    n_trials = scenario.n_trials if n_trials is None else int(n_trials)
    seed = scenario.seed if seed is None else int(seed)
    if n_trials < 1:
        raise ValidityError("n_trials must be >= 1")
    if truths is None:
        truths = campaign_truths(seed, n_trials, scenario.attacker_fraction, truth_stream)
    else:
        truths = np.broadcast_to(np.asarray(truths, dtype=bool), (n_trials,)).copy()
    jobs = [(scenario, seed, stream, s, truths[s:s + CHUNK]) for s in range(0, n_trials, CHUNK)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_simulate_chunk, jobs))
    else:
        parts = [_simulate_chunk(job) for job in jobs]
    return CampaignData(truths,
                        np.concatenate([p[0] for p in parts]),
                        np.concatenate([p[1] for p in parts]),
                        np.concatenate([p[2] for p in parts]))


# --------------------------------------------------------------------------
# ROC curves

@dataclass
class RocCurve:
    thresholds: np.ndarray
    fpr: np.ndarray
    tpr: np.ndarray
    n_trials: int
    n_pos: int
    n_neg: int
    auc: float = field(init=False)

    def __post_init__(self):
        self.auc = trapezoid_auc(self.fpr, self.tpr)

    @property
    def points(self) -> list[tuple[float, float]]:
        """Operating points sorted by fpr, with (0, 0) and (1, 1) added."""
        pts = set(zip(self.fpr.tolist(), self.tpr.tolist())) | {(0.0, 0.0), (1.0, 1.0)}
        return sorted(pts)

    @property
    def auc_stderr(self) -> float:
        return auc_standard_error(self.auc, self.n_pos, self.n_neg)


def trapezoid_auc(fpr, tpr) -> float:
    pts = sorted(set(zip(np.asarray(fpr).tolist(), np.asarray(tpr).tolist()))
                 | {(0.0, 0.0), (1.0, 1.0)})
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    return float(np.sum(np.diff(x) * (y[1:] + y[:-1]) / 2.0))


def auc_standard_error(auc: float, n_pos: int, n_neg: int) -> float:
    """Hanley-McNeil standard error of an empirical AUC."""
    q1 = auc / (2.0 - auc)
    q2 = 2.0 * auc * auc / (1.0 + auc)
    var = (auc * (1 - auc) + (n_pos - 1) * (q1 - auc ** 2)
           + (n_neg - 1) * (q2 - auc ** 2)) / (n_pos * n_neg)
    return math.sqrt(max(var, 0.0))


def roc_from_statistic(truth, statistic, thresholds=None) -> RocCurve:
    """Operating points of the rule ``statistic > threshold -> attacker``.

    With ``thresholds=None`` every distinct statistic value is used, which
    makes the trapezoidal AUC equal to the Mann-Whitney estimate.
    """
    truth = np.asarray(truth, dtype=bool)
    stat = np.asarray(statistic, dtype=float)
    pos = np.sort(stat[truth])
    neg = np.sort(stat[~truth])
    if len(pos) == 0 or len(neg) == 0:
        raise ValidityError("an ROC needs trials of both classes")
    t = np.unique(stat) if thresholds is None else np.asarray(thresholds, dtype=float)
    tpr = (len(pos) - np.searchsorted(pos, t, side="right")) / len(pos)
    fpr = (len(neg) - np.searchsorted(neg, t, side="right")) / len(neg)
    return RocCurve(t, fpr, tpr, len(stat), len(pos), len(neg))


def sweep_roc(scenario: Scenario, thresholds=None, workers: int = 1,
              data: CampaignData | None = None) -> RocCurve:
    """Spread-test ROC over ``thresholds`` (meters), all on the same trials."""
    if thresholds is not None and len(thresholds) < 2:
        raise ValidityError("an ROC sweep needs at least two thresholds")
    if not 0.0 < scenario.attacker_fraction < 1.0:
        raise ValidityError("attacker_fraction must be strictly between 0 and 1")
    if data is None:
        data = simulate(scenario, workers=workers)
    return roc_from_statistic(data.truth, data.spread, thresholds)


# --------------------------------------------------------------------------
# free-space interval test

def _naive_draws(n_crs, r_crn, n_trials, rng):
    crs = sample_disc(n_trials * n_crs, r_crn, rng).reshape(n_trials, n_crs, 2)
    attacker = sample_disc(n_trials, r_crn, rng)
    return crs, attacker


def naive_attacker_flags(crs, attacker, ratio_r, fspl: FsplModel | None = None,
                         p_pu_w: float = 100.0) -> np.ndarray:
    """Interval-test decisions for attacker transmissions (FC at the origin)."""
    fspl = fspl or FsplModel.from_frequency(593e6)
    d_att = np.hypot(crs[..., 0] - attacker[:, None, 0], crs[..., 1] - attacker[:, None, 1])
    p_r = fspl_received_power(p_pu_w / ratio_r, d_att, fspl)
    d_i = ideal_distance_estimate(p_pu_w, p_r, fspl)
    d_fc = np.hypot(crs[..., 0], crs[..., 1])
    return kernels.interval_flags(np.ascontiguousarray(d_i), np.ascontiguousarray(d_fc),
                                  NAIVE_RTOL)


def run_naive_monte_carlo(n_crs: int, r_crn: float, ratio_r: float, n_trials: int,
                          seed: int) -> float:
    """Fraction of attacker transmissions flagged by the interval test."""
    if n_trials < 1:
        raise ValidityError("n_trials must be >= 1")
    rng = np.random.default_rng(seed)
    crs, attacker = _naive_draws(n_crs, r_crn, n_trials, rng)
    return float(np.mean(naive_attacker_flags(crs, attacker, ratio_r)))


@dataclass(frozen=True)
class NaivePoint:
    n_crs: int
    accuracy: float
    stderr: float
    n_trials: int


def naive_sweep(n_values, r_crn: float, ratio_r: float, n_trials: int, seed: int) -> list[NaivePoint]:
    """Detection accuracy for each N, every N reusing the same draws (first N CRs)."""
    n_values = [int(n) for n in n_values]
    rng = np.random.default_rng(seed)
    crs, attacker = _naive_draws(max(n_values), r_crn, n_trials, rng)
    out = []
    for n in n_values:
        p = float(np.mean(naive_attacker_flags(crs[:, :n], attacker, ratio_r)))
        out.append(NaivePoint(n, p, math.sqrt(p * (1 - p) / n_trials), n_trials))
    return out


def run_naive_false_positive(n_crs: int, r_crn: float, field_side: float, n_trials: int,
                             seed: int, p_pu_w: float = 100.0) -> float:
    """Fraction of PU transmissions the interval test flags as attacks."""
    fspl = FsplModel.from_frequency(593e6)
    rng = np.random.default_rng(seed)
    fc = field_side * rng.random((n_trials, 2))
    pu = field_side * rng.random((n_trials, 2)) - fc
    crs = sample_disc(n_trials * n_crs, r_crn, rng).reshape(n_trials, n_crs, 2)
    d_pu = np.hypot(crs[..., 0] - pu[:, None, 0], crs[..., 1] - pu[:, None, 1])
    d_i = ideal_distance_estimate(p_pu_w, fspl_received_power(p_pu_w, d_pu, fspl), fspl)
    d_fc = np.hypot(crs[..., 0], crs[..., 1])
    flags = kernels.interval_flags(np.ascontiguousarray(d_i), np.ascontiguousarray(d_fc),
                                   NAIVE_RTOL)
    return float(np.mean(flags))


def fig4_ratio(scenario: Scenario) -> float:
    return float(dbm_to_watts(scenario.transmitter.p_pu) / dbm_to_watts(scenario.transmitter.p_attacker))


# --------------------------------------------------------------------------
# learned baseline

@dataclass
class Comparison:
    proposed: RocCurve
    bpnn: RocCurve
    model: nn.BpnnModel
    scaler: nn.FeatureScaler
    train_accuracy: float


def bpnn_training_set(scenario: Scenario, train_trials: int, seed: int, workers: int = 1):
    data = simulate(scenario, train_trials, seed, workers=workers,
                    stream=STREAM_TRAIN_TRIAL, truth_stream=STREAM_TRAIN_TRUTH)
    feats = data.bpnn_features().reshape(-1, 3)
    labels = nn.one_hot(np.repeat(data.truth, scenario.n_crs))
    return feats, labels


def run_bpnn_comparison(scenario: Scenario, train_trials: int | None = None,
                        test_trials: int | None = None, seed: int | None = None,
                        workers: int = 1, rss_thresholds=None, bpnn_thresh=None) -> Comparison:
    """Train the 3-4-2 baseline, then score both detectors on one shared test set.

    Training trials come from the true propagation model; the baseline never
    sees the estimated model, so model errors only affect the spread test.
    Per-CR scores are averaged into one network-level statistic.
    """
    settings = scenario.bpnn
    train_trials = settings.train_trials if train_trials is None else int(train_trials)
    test_trials = scenario.n_trials if test_trials is None else int(test_trials)
    seed = scenario.seed if seed is None else int(seed)
    if train_trials < 1 or test_trials < 1:
        raise ValidityError("train_trials and test_trials must be >= 1")

    raw_x, y = bpnn_training_set(scenario, train_trials, seed, workers)
    scaler = nn.FeatureScaler.fit(raw_x)
    x = scaler.transform(raw_x)
    model = nn.train((x, y), settings.epochs, settings.learning_rate,
                     stream_rng(seed, STREAM_BPNN), loss_kind=settings.loss)

    test = simulate(scenario, test_trials, seed, workers=workers)
    proposed = roc_from_statistic(test.truth, test.spread, rss_thresholds)
    feats = scaler.transform(test.bpnn_features().reshape(-1, 3))
    scores = nn.score(model, feats).reshape(test_trials, scenario.n_crs).mean(axis=1)
    baseline = roc_from_statistic(test.truth, scores, bpnn_thresh)
    return Comparison(proposed, baseline, model, scaler, nn.accuracy(model, x, y))


# --------------------------------------------------------------------------
# CSV output

CSV_HEADER = "threshold,fpr,tpr,n_trials,scenario_id,detector"


def fmt(x: float) -> str:
    return f"{x:.6g}"


def roc_rows(curve: RocCurve, scenario_id: str, detector: str) -> list[str]:
    return [",".join((fmt(t), fmt(f), fmt(p), str(curve.n_trials), scenario_id, detector))
            for t, f, p in zip(curve.thresholds, curve.fpr, curve.tpr)]


def run_campaign(scenario: Scenario, detector: str = "rss", workers: int = 1) -> tuple[str, dict]:
    """CSV text plus {detector: auc} for a config-driven campaign."""
    rows = [CSV_HEADER]
    aucs = {}
    if detector == "rss":
        curve = sweep_roc(scenario, default_thresholds(scenario), workers=workers)
        rows += roc_rows(curve, scenario.name, "rss")
        aucs["rss"] = curve.auc
    else:
        cmp = run_bpnn_comparison(scenario, workers=workers,
                                  rss_thresholds=default_thresholds(scenario),
                                  bpnn_thresh=bpnn_thresholds())
        if detector in ("rss", "both"):
            rows += roc_rows(cmp.proposed, scenario.name, "rss")
            aucs["rss"] = cmp.proposed.auc
        rows += roc_rows(cmp.bpnn, scenario.name, "bpnn")
        aucs["bpnn"] = cmp.bpnn.auc
    return "\n".join(rows) + "\n", aucs
