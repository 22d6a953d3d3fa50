"""Random placement of the fusion center, PU, attacker and CRs."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import ValidityError


class Point2D(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Topology:
    """One realization of the network geometry.

    ``crs`` is an ``(N, 2)`` array of CR coordinates in meters. CRs and the
    attacker live on the disc of radius ``r_crn`` centered at the FC; the PU
    and FC live in the square ``[0, field_side]^2``.
    """

    fc: Point2D
    pu: Point2D
    attacker: Point2D
    crs: np.ndarray
    r_crn: float
    field_side: float

    @property
    def n_crs(self) -> int:
        return len(self.crs)

    def cr_distances(self, target: Point2D) -> np.ndarray:
        return np.hypot(self.crs[:, 0] - target[0], self.crs[:, 1] - target[1])

    def fc_distances(self) -> np.ndarray:
        return self.cr_distances(self.fc)


def distance(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def sample_disc(n: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """``n`` points uniform over the area of a disc centered at the origin."""
    # inverse-CDF radius gives uniform area density
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def sample_topology(n_crs: int, r_crn: float, field_side: float,
                    rng: np.random.Generator) -> Topology:
    if n_crs < 1:
        raise ValidityError(f"need at least one CR, got n_crs={n_crs}")
    if not r_crn > 0:
        raise ValidityError(f"r_crn must be positive, got {r_crn}")
    if not field_side >= 2 * r_crn:
        raise ValidityError(
            f"field_side={field_side} must be at least 2*r_crn={2 * r_crn}")

    fc = Point2D(*(field_side * rng.random(2)))
    pu = Point2D(*(field_side * rng.random(2)))
    # attacker shares the CRs' disc
    disc = sample_disc(n_crs + 1, r_crn, rng)
    disc[:, 0] += fc.x
    disc[:, 1] += fc.y
    attacker = Point2D(*disc[-1])
    crs = disc[:-1]
    crs.setflags(write=False)
    return Topology(fc=fc, pu=pu, attacker=attacker, crs=crs,
                    r_crn=float(r_crn), field_side=float(field_side))


def move_pu(topology: Topology, displacement_scale: float,
            rng: np.random.Generator) -> Topology:
    """Displace the PU by a uniform random offset of length <= scale, clamped to the field."""
    if displacement_scale < 0:
        raise ValidityError("displacement_scale must be non-negative")
    # always consume the draw so a zero scale keeps downstream streams aligned
    offset = sample_disc(1, displacement_scale, rng)[0]
    side = topology.field_side
    x = min(max(topology.pu.x + offset[0], 0.0), side)
    y = min(max(topology.pu.y + offset[1], 0.0), side)
    return replace(topology, pu=Point2D(x, y))
