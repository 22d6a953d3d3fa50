"""A 3-4-2 back-propagation network used as the learned baseline detector.

Each CR report becomes one sample ``(x, y, rss)`` with the CR position taken
relative to the FC. Outputs are sigmoid scores for (PU, attacker).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .errors import ConfigError, ValidityError

N_IN, N_HIDDEN, N_OUT = 3, 4, 2
LOSSES = ("mse", "cross_entropy")


def sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


@dataclass
class BpnnModel:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    def __post_init__(self):
        shapes = {"w1": (N_HIDDEN, N_IN), "b1": (N_HIDDEN,), "w2": (N_OUT, N_HIDDEN), "b2": (N_OUT,)}
        for name, shape in shapes.items():
            arr = np.array(getattr(self, name), dtype=np.float64)
            if arr.shape != shape:
                raise ValidityError(f"{name} must have shape {shape}, got {arr.shape}")
            if not np.all(np.isfinite(arr)):
                raise ValidityError(f"{name} has non-finite weights")
            setattr(self, name, arr)

    @classmethod
    def zeros(cls) -> BpnnModel:
        return cls(np.zeros((N_HIDDEN, N_IN)), np.zeros(N_HIDDEN),
                   np.zeros((N_OUT, N_HIDDEN)), np.zeros(N_OUT))

    @classmethod
    def random(cls, rng: np.random.Generator, scale: float = 0.5) -> BpnnModel:
        u = lambda *shape: rng.uniform(-scale, scale, size=shape)
        return cls(u(N_HIDDEN, N_IN), u(N_HIDDEN), u(N_OUT, N_HIDDEN), u(N_OUT))

    def copy(self) -> BpnnModel:
        return BpnnModel(self.w1.copy(), self.b1.copy(), self.w2.copy(), self.b2.copy())

    def flat(self) -> np.ndarray:
        return np.concatenate([self.w1.ravel(), self.b1, self.w2.ravel(), self.b2])

    @classmethod
    def from_flat(cls, values) -> BpnnModel:
        v = np.asarray(values, dtype=np.float64)
        sizes = [N_HIDDEN * N_IN, N_HIDDEN, N_OUT * N_HIDDEN, N_OUT]
        if v.size != sum(sizes):
            raise ConfigError(f"expected {sum(sizes)} weights, got {v.size}")
        a, b, c, _ = np.cumsum(sizes)
        return cls(v[:a].reshape(N_HIDDEN, N_IN), v[a:b], v[b:c].reshape(N_OUT, N_HIDDEN), v[c:])

    def save(self, path) -> None:
        # row-major layer 1 weights, layer 1 biases, then layer 2 likewise
        Path(path).write_text(" ".join(repr(float(v)) for v in self.flat()) + "\n")

    @classmethod
    def load(cls, path) -> BpnnModel:
        try:
            values = [float(tok) for tok in Path(path).read_text().split()]
        except ValueError as exc:
            raise ConfigError(f"unreadable weight file {path}: {exc}") from None
        return cls.from_flat(values)


@dataclass(frozen=True)
class BpnnSample:
    features: np.ndarray
    label: np.ndarray


@dataclass(frozen=True)
class FeatureScaler:
    """Min-max scaling to [-1, 1], fitted on training features."""

    lo: np.ndarray
    hi: np.ndarray

    @classmethod
    def fit(cls, x) -> FeatureScaler:
        x = np.asarray(x, dtype=float)
        return cls(x.min(axis=0), x.max(axis=0))

    def transform(self, x):
        span = np.where(self.hi > self.lo, self.hi - self.lo, 1.0)
        z = 2.0 * (np.asarray(x, dtype=float) - self.lo) / span - 1.0
        # unseen test values can fall outside the training range
        return np.clip(z, -1.0, 1.0)


def one_hot(is_attacker) -> np.ndarray:
    flags = np.asarray(is_attacker, dtype=bool)
    return np.stack([~flags, flags], axis=-1).astype(np.float64)


def forward(model: BpnnModel, features):
    """Class scores (PU, attacker); accepts one sample or a batch of rows."""
    x = np.asarray(features, dtype=np.float64)
    h = sigmoid(x @ model.w1.T + model.b1)
    return sigmoid(h @ model.w2.T + model.b2)


def score(model: BpnnModel, features):
    """Attacker score minus PU score; > 0 is the argmax decision for the attacker."""
    out = forward(model, features)
    return out[..., 1] - out[..., 0]


def loss(model: BpnnModel, x, y, kind: str = "mse") -> float:
    o = forward(model, x)
    y = np.asarray(y, dtype=float)
    if kind == "mse":
        return float(0.5 * np.sum((o - y) ** 2) / len(np.atleast_2d(y)))
    return float(-np.sum(y * np.log(o) + (1 - y) * np.log(1 - o)) / len(np.atleast_2d(y)))


def gradients(model: BpnnModel, x, y, kind: str = "mse") -> BpnnModel:
    """Back-propagated gradient of ``loss`` (batch mean), packed like a model."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    h = sigmoid(x @ model.w1.T + model.b1)
    o = sigmoid(h @ model.w2.T + model.b2)
    delta_o = (o - y) if kind == "cross_entropy" else (o - y) * o * (1 - o)
    delta_h = (delta_o @ model.w2) * h * (1 - h)
    n = len(x)
    return BpnnModel(delta_h.T @ x / n, delta_h.sum(axis=0) / n,
                     delta_o.T @ h / n, delta_o.sum(axis=0) / n)


def train(samples, epochs: int, learning_rate: float, rng: np.random.Generator,
          loss_kind: str = "mse", init: BpnnModel | None = None,
          history: list | None = None) -> BpnnModel:
    """Per-sample SGD over shuffled epochs.

    ``samples`` is either a list of ``BpnnSample`` or an ``(x, y)`` pair of
    arrays. The initial weights are drawn from ``rng`` before any shuffling,
    so ``epochs=0`` returns the initial model. Per-epoch mean loss is appended
    to ``history`` when given.
    """
    if loss_kind not in LOSSES:
        raise ConfigError(f"unknown loss {loss_kind!r}; choose from {LOSSES}")
    if not learning_rate > 0:
        raise ValidityError("learning_rate must be positive")
    if isinstance(samples, tuple):
        x, y = samples
    else:
        if not samples:
            raise ValidityError("no training samples")
        x = np.array([s.features for s in samples])
        y = np.array([s.label for s in samples])
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if len(x) == 0:
        raise ValidityError("no training samples")
    classes = y.argmax(axis=1)
    if np.all(classes == classes[0]):
        raise ValidityError("training data contains a single class")

    model = init.copy() if init is not None else BpnnModel.random(rng)
    for _ in range(epochs):
        order = rng.permutation(len(x)).astype(np.int64)
        total = kernels.sgd_epoch(model.w1, model.b1, model.w2, model.b2, x, y, order,
                                  float(learning_rate), loss_kind == "cross_entropy")
        if history is not None:
            history.append(total / len(x))
    return model


def accuracy(model: BpnnModel, x, y) -> float:
    pred = forward(model, x).argmax(axis=-1)
    return float(np.mean(pred == np.asarray(y).argmax(axis=-1)))


@dataclass
class NetworkDecision:
    """Network-level aggregation of per-CR scores."""

    mean_score: float
    vote_fraction: float
    per_cr: np.ndarray = field(repr=False)

    @property
    def majority_attacker(self) -> bool:
        return self.vote_fraction > 0.5


def aggregate(model: BpnnModel, features) -> NetworkDecision:
    s = score(model, features)
    return NetworkDecision(float(np.mean(s)), float(np.mean(s > 0)), s)
