"""Pure numpy implementations of the batched kernels.

Signatures mirror ``_kernels.pyx``; ``kernels`` picks one at import.
"""

import numpy as np


def interval_flags(d, dfc, rtol):
    """Per-row emptiness of the interval-intersection test (1 = attacker)."""
    upper = np.min(d + dfc, axis=1)
    lower = np.max(np.abs(d - dfc), axis=1)
    return (upper < lower - rtol * upper).astype(np.uint8)


def group_dhat(pr, xy, r_neighbor, assumed_p_t, c_est, g_est):
    """Group-averaged distance estimates for a batch of trials.

    pr: (T, N) received dBm; xy: (T, N, 2) CR positions; c_est, g_est: (T,)
    per-trial estimated intercept and slope. Returns (T, N) estimates.
    """
    dx = xy[:, :, None, 0] - xy[:, None, :, 0]
    dy = xy[:, :, None, 1] - xy[:, None, :, 1]
    adj = np.sqrt(dx * dx + dy * dy) <= r_neighbor
    idx = np.arange(pr.shape[1])
    adj[:, idx, idx] = True
    sums = np.einsum("tij,tj->ti", adj.astype(np.float64), pr)
    mean = sums / adj.sum(axis=2)
    loss = assumed_p_t - mean
    return 10.0 ** ((loss - c_est[:, None]) / g_est[:, None])


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def sgd_epoch(w1, b1, w2, b2, x, y, order, lr, cross_entropy):
    """One pass of per-sample SGD over ``order``; updates weights in place.

    Returns the summed loss, each term evaluated before its own update.
    """
    total = 0.0
    for s in order:
        xs = x[s]
        t = y[s]
        h = _sigmoid(w1 @ xs + b1)
        o = _sigmoid(w2 @ h + b2)
        if cross_entropy:
            total += -float(np.sum(t * np.log(o) + (1 - t) * np.log(1 - o)))
            delta_o = o - t
        else:
            total += 0.5 * float(np.sum((o - t) ** 2))
            delta_o = (o - t) * o * (1 - o)
        delta_h = (w2.T @ delta_o) * h * (1 - h)
        w2 -= lr * np.outer(delta_o, h)
        b2 -= lr * delta_o
        w1 -= lr * np.outer(delta_h, xs)
        b1 -= lr * delta_h
    return total
