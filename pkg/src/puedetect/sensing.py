"""Cooperative sensing at the fusion center: RSS reports, neighbor grouping,
group-averaged loss and per-group distance estimates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidityError
from .propagation import LogShadowModel, estimated_distance_under_error, lognormal_path_loss
from .topology import Topology


@dataclass(frozen=True)
class SensingReport:
    cr_index: int
    received_power: float
    neighbor_indices: frozenset


@dataclass(frozen=True)
class GroupEstimate:
    group_leader: int
    avg_loss: float
    est_distance: float
    member_count: int


def measure_all(topology: Topology, transmitter, p_t: float, model: LogShadowModel,
                rng: np.random.Generator | None) -> np.ndarray:
    """Received power (dBm) at every CR, one independent shadowing draw each."""
    d = topology.cr_distances(transmitter)
    if np.any(d <= 0):
        raise ValidityError("a CR coincides with the transmitter")
    return p_t - lognormal_path_loss(d, model, rng)


def build_neighbor_matrix(topology_or_xy, r_neighbor: float) -> np.ndarray:
    """Symmetric 0/1 matrix with a[i, j] = 1 iff CRs i and j are within r_neighbor.

    The diagonal is always 1: each CR leads a group that contains itself.
    """
    if r_neighbor < 0:
        raise ValidityError("r_neighbor must be non-negative")
    xy = getattr(topology_or_xy, "crs", topology_or_xy)
    xy = np.asarray(xy, dtype=float)
    dist = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])
    a = (dist <= r_neighbor).astype(np.uint8)
    np.fill_diagonal(a, 1)
    return a


def group_average_loss(matrix: np.ndarray, measurements, assumed_p_t: float) -> list[tuple[int, float]]:
    """``L_i* = assumed_p_t - mean(P_r,k for a[i, k] = 1)``, averaged in dBm."""
    measurements = np.asarray(measurements, dtype=float)
    matrix = np.asarray(matrix)
    if matrix.shape != (len(measurements), len(measurements)):
        raise ValidityError("neighbor matrix does not match the number of measurements")
    out = []
    for i, row in enumerate(matrix):
        members = measurements[row.astype(bool)]
        out.append((i, assumed_p_t - float(members.mean())))
    return out


def estimate_group_distances(losses, model_est: LogShadowModel,
                             member_counts=None) -> list[GroupEstimate]:
    estimates = []
    for k, (leader, loss) in enumerate(losses):
        count = 1 if member_counts is None else int(member_counts[k])
        d_hat = float(estimated_distance_under_error(loss, model_est))
        estimates.append(GroupEstimate(leader, loss, d_hat, count))
    return estimates


def reports(topology: Topology, measurements, r_neighbor: float) -> list[SensingReport]:
    """What each CR would send the FC: its RSS plus its neighbor list."""
    a = build_neighbor_matrix(topology, r_neighbor)
    return [SensingReport(i, float(p), frozenset(np.flatnonzero(a[i]).tolist()))
            for i, p in enumerate(measurements)]


def neighbor_matrix_from_reports(reps) -> np.ndarray:
    n = len(reps)
    a = np.zeros((n, n), dtype=np.uint8)
    for rep in reps:
        a[rep.cr_index, list(rep.neighbor_indices)] = 1
        a[rep.cr_index, rep.cr_index] = 1
    return a


def group_estimates(topology: Topology, measurements, r_neighbor: float,
                    assumed_p_t: float, model_est: LogShadowModel) -> list[GroupEstimate]:
    """Full FC pipeline: neighbor matrix, group-averaged loss, distance inversion."""
    a = build_neighbor_matrix(topology, r_neighbor)
    losses = group_average_loss(a, measurements, assumed_p_t)
    return estimate_group_distances(losses, model_est, member_counts=a.sum(axis=1))
