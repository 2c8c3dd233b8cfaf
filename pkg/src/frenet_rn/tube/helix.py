"""Overlap diagnostics for disk tubes around the unit helix (cos t, sin t, t).

Section points are written in the reflected convention f - x N + y B, so that
a point on the ellipse (x + 1)^2 + y^2 / 2 = r^2 has cos T = (x + 1) / r and
sin T = y / (r sqrt 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from ..curve import CurveSpec, make_jet
from .core import TubeSpec, tube_map
from .sections import Disk

WITNESS_XTOL = 1e-12
WITNESS_RESIDUAL = 1e-9


@dataclass(frozen=True)
class HelixOverlap:
    """Ellipse scale r in (0, 3) and angle T on that ellipse."""

    r: float
    T: float

    def __post_init__(self):
        if not 0 < self.r < 3:
            raise ValueError("r must lie in (0, 3)")
        if not -math.pi <= self.T <= math.pi:
            raise ValueError("T must lie in [-pi, pi]")

    @property
    def T_I(self) -> float:
        """Largest |T| whose ellipse point stays in the disk of radius 2 (pi when r <= 1)."""
        if self.r <= 1:
            return math.pi
        c = (math.sqrt(2) * math.sqrt(self.r ** 2 - 1) - 1) / self.r
        return math.acos(max(-1.0, min(1.0, c)))

    @property
    def in_disk(self) -> bool:
        return abs(self.T) <= self.T_I + 1e-15

    @property
    def point(self) -> np.ndarray:
        return np.array([self.r * math.cos(self.T) - 1.0, math.sqrt(2) * self.r * math.sin(self.T)])

    @classmethod
    def from_point(cls, x: float, y: float) -> "HelixOverlap":
        r = math.hypot(x + 1.0, y / math.sqrt(2))
        return cls(r, math.atan2(y / (r * math.sqrt(2)), (x + 1.0) / r))


def helix_overlap_g(ov: HelixOverlap, s):
    """g(s) = s - r sin T + r sin(s + T)."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("s must be nonnegative")
    out = s - ov.r * math.sin(ov.T) + ov.r * np.sin(s + ov.T)
    return float(out) if out.ndim == 0 else out


def boundary_root(r: float) -> float:
    """Positive root of s - r sin s for r > 1, by bisection on [arccos(1/r), pi]."""
    if not r > 1:
        raise ValueError("a positive root needs r > 1")
    lo = math.acos(1.0 / r)  # minimum of s - r sin s, where it is negative
    return bisect(lambda s: s - r * math.sin(s), lo, math.pi, xtol=WITNESS_XTOL, rtol=4 * np.finfo(float).eps)


def helix_tube(radius: float, interval=(0.0, 2 * math.pi), reflected: bool = True) -> TubeSpec:
    """Disk tube of the given radius around the unit helix."""
    return TubeSpec(make_jet(CurveSpec.helix()), interval, Disk(radius), reflect_first=reflected)


@dataclass(frozen=True)
class CollisionWitness:
    P1: tuple  # (section point, t)
    P2: tuple
    image: np.ndarray
    residual: float
    s0: float


def helix_collision_witness(R: float, t: float = 0.0) -> CollisionWitness:
    """Two distinct points of disk(R) x R with the same image under the reflected helix tube map.

    With r = R/2 and s0 the positive root of s - r sin s, the points
    ((-1 - r, 0), t) and ((-1 - r cos s0, -sqrt 2 s0), t + s0) both map to
    (-r cos t, -r sin t, t); both lie in the open disk of radius R when R > 2.
    """
    if not R > 2:
        raise ValueError("no collision witness for R <= 2: the tube map is injective there")
    r = R / 2
    s0 = boundary_root(r)
    x1 = np.array([-1.0 - r, 0.0])
    y1 = np.array([-1.0 - r * math.cos(s0), -math.sqrt(2) * s0])
    spec = helix_tube(R, (t, t + s0))
    g1 = tube_map(spec, x1, t)
    g2 = tube_map(spec, y1, t + s0)
    expected = np.array([-r * math.cos(t), -r * math.sin(t), t])
    residual = float(max(np.max(np.abs(g1 - expected)), np.max(np.abs(g2 - expected))))
    if residual > WITNESS_RESIDUAL * max(1.0, abs(t)):
        raise ArithmeticError(f"witness images disagree (residual {residual:.3e})")
    for p in (x1, y1):
        if not np.linalg.norm(p) < R:
            raise ArithmeticError("witness point left the disk")
    return CollisionWitness((x1, t), (y1, t + s0), expected, residual, s0)
