"""Cross-sections: compact regions of R^n carried along the axis curve."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ..quadrature import integrate_region


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n via vol(B^n) = vol(B^{n-1}) * int_{-1}^{1} (1 - x^2)^{(n-1)/2} dx.

    The slice integral is the Beta value B(1/2, (n+1)/2).
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    vol = 2.0
    for k in range(2, n + 1):
        vol *= math.sqrt(math.pi) * math.gamma((k + 1) / 2) / math.gamma(k / 2 + 1)
    return vol


def sphere_volume(n_minus_1: int, radius: float = 1.0) -> float:
    """(n-1)-volume of the sphere of the given radius in R^n: n R^{n-1} vol(B^n)."""
    n = n_minus_1 + 1
    if n < 2 or not radius > 0:
        raise ValueError("need n >= 2 and a positive radius")
    return n * radius ** (n - 1) * unit_ball_volume(n)


class CrossSection:
    """Compact region with positive volume.

    Subclasses provide ``dim``, ``bbox`` and a vectorized ``contains``;
    ``fibers`` (intervals of the last coordinate above points of the first
    dim-1 coordinates) is optional and enables exact fiber integration.
    """

    dim: int

    @property
    def bbox(self):
        raise NotImplementedError

    def contains(self, x) -> np.ndarray:
        raise NotImplementedError

    def volume(self) -> float:
        return integrate_region(self, lambda x: np.ones(len(x)), method="grid", tol=1e-9).value

    def barycenter(self) -> np.ndarray:
        vol = self.volume()
        return np.array([
            integrate_region(self, lambda x, i=i: x[:, i], method="grid", tol=1e-9).value / vol
            for i in range(self.dim)
        ])

    def boundary(self, m: int):
        """m boundary points (counterclockwise) and outward unit normals; planar sections only."""
        raise NotImplementedError(f"{type(self).__name__} has no boundary parametrization")

    def extent(self, axis: int = 0):
        """(min, max) of coordinate ``axis`` over the section."""
        lo, hi = self.bbox
        return float(lo[axis]), float(hi[axis])


class Disk(CrossSection):
    def __init__(self, radius: float, center=None, dim: int = 2):
        if not radius > 0:
            raise ValueError("disk radius must be positive")
        self.radius = float(radius)
        self.center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
        self.dim = self.center.size

    @property
    def bbox(self):
        return self.center - self.radius, self.center + self.radius

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return np.sum((x - self.center) ** 2, axis=-1) <= self.radius ** 2

    def fibers(self, heads):
        heads = np.asarray(heads, dtype=float)
        d2 = np.sum((heads - self.center[:-1]) ** 2, axis=1)
        half = np.sqrt(np.clip(self.radius ** 2 - d2, 0.0, None))
        c = self.center[-1]
        return (c - half)[:, None], (c + half)[:, None]

    def volume(self):
        return unit_ball_volume(self.dim) * self.radius ** self.dim

    def barycenter(self):
        return self.center.copy()

    def boundary(self, m):
        if self.dim != 2:
            return super().boundary(m)
        th = 2 * np.pi * np.arange(m) / m
        normals = np.stack([np.cos(th), np.sin(th)], axis=1)
        return self.center + self.radius * normals, normals

    def __repr__(self):
        return f"Disk(radius={self.radius}, center={self.center.tolist()})"


class ParabolicRegion(CrossSection):
    """{(x, y) : |x| <= w, |y| <= a x^2 + c}; defaults give area 13/3 and barycenter 0."""

    dim = 2

    def __init__(self, half_width: float = 1.0, a: float = 0.25, c: float = 1.0):
        if not (half_width > 0 and c > 0 and a >= 0):
            raise ValueError("need half_width > 0, c > 0, a >= 0")
        self.w, self.a, self.c = float(half_width), float(a), float(c)

    @property
    def bbox(self):
        top = self.a * self.w ** 2 + self.c
        return np.array([-self.w, -top]), np.array([self.w, top])

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return (np.abs(x[..., 0]) <= self.w) & (np.abs(x[..., 1]) <= self.a * x[..., 0] ** 2 + self.c)

    def fibers(self, heads):
        x = np.asarray(heads, dtype=float)[:, 0]
        half = np.where(np.abs(x) <= self.w, self.a * x ** 2 + self.c, 0.0)
        return -half[:, None], half[:, None]

    def volume(self):
        return 4 * self.a * self.w ** 3 / 3 + 4 * self.c * self.w

    def barycenter(self):
        return np.zeros(2)

    def boundary(self, m):
        # walk the four sides counterclockwise, splitting points by side length
        xs = np.linspace(-self.w, self.w, 200)
        top = np.stack([xs[::-1], self.a * xs[::-1] ** 2 + self.c], axis=1)
        bottom = np.stack([xs, -(self.a * xs ** 2 + self.c)], axis=1)
        h = self.a * self.w ** 2 + self.c
        right = np.stack([np.full(50, self.w), np.linspace(-h, h, 50)], axis=1)
        left = np.stack([np.full(50, -self.w), np.linspace(h, -h, 50)], axis=1)
        loop = np.vstack([bottom, right, top, left])
        return _resample_loop(loop, m)

    def __repr__(self):
        return f"ParabolicRegion(half_width={self.w}, a={self.a}, c={self.c})"


class Polygon(CrossSection):
    """Simple polygon given by its vertices (either orientation)."""

    dim = 2

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise ValueError("polygon needs at least three 2-D vertices")
        x, y = v[:, 0], v[:, 1]
        area2 = np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)
        if area2 == 0:
            raise ValueError("polygon has zero area")
        self.vertices = v if area2 > 0 else v[::-1]

    @property
    def bbox(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        px, py = x[..., 0][..., None], x[..., 1][..., None]
        a, b = self.vertices, np.roll(self.vertices, -1, axis=0)
        cross = (a[:, 1] > py) != (b[:, 1] > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = a[:, 0] + (py - a[:, 1]) * (b[:, 0] - a[:, 0]) / (b[:, 1] - a[:, 1])
        hits = cross & (px < xint)
        return np.count_nonzero(hits, axis=-1) % 2 == 1

    def fibers(self, heads):
        x = np.asarray(heads, dtype=float)[:, 0][:, None]
        a, b = self.vertices, np.roll(self.vertices, -1, axis=0)
        crosses = (a[:, 0] > x) != (b[:, 0] > x)
        with np.errstate(divide="ignore", invalid="ignore"):
            y = a[:, 1] + (x - a[:, 0]) * (b[:, 1] - a[:, 1]) / (b[:, 0] - a[:, 0])
        y = np.where(crosses, y, np.inf)
        y = np.sort(y, axis=1)
        k = len(a) // 2
        lo, hi = y[:, 0:2 * k:2], y[:, 1:2 * k:2]
        empty = ~np.isfinite(hi)
        lo = np.where(empty, 0.0, lo)
        hi = np.where(empty, 0.0, hi)
        return lo, hi

    def volume(self):
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    def barycenter(self):
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        xn, yn = np.roll(x, -1), np.roll(y, -1)
        c = x * yn - xn * y
        return np.array([np.dot(x + xn, c), np.dot(y + yn, c)]) / (6 * self.volume())

    def boundary(self, m):
        return _resample_loop(np.vstack([self.vertices, self.vertices[:1]]), m)

    def __repr__(self):
        return f"Polygon({self.vertices.tolist()})"


class ImplicitSection(CrossSection):
    """{x : fn(x) <= 0} inside a given bounding box; integrals by masked grid quadrature."""

    def __init__(self, fn: Callable, lo, hi):
        self.fn = fn
        self._lo = np.asarray(lo, dtype=float)
        self._hi = np.asarray(hi, dtype=float)
        self.dim = self._lo.size

    @property
    def bbox(self):
        return self._lo, self._hi

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        inside_box = np.all((x >= self._lo) & (x <= self._hi), axis=-1)
        return inside_box & (np.asarray(self.fn(x)) <= 0)


def _resample_loop(loop, m):
    """m points equally spaced by arc length along a closed polyline, with outward normals."""
    closed = np.vstack([loop, loop[:1]]) if not np.allclose(loop[0], loop[-1]) else loop
    seg = np.linalg.norm(np.diff(closed, axis=0), axis=1)
    keep = np.concatenate([[True], seg > 0])
    closed = closed[keep]
    s = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(closed, axis=0), axis=1))])
    targets = s[-1] * np.arange(m) / m
    pts = np.stack([np.interp(targets, s, closed[:, 0]), np.interp(targets, s, closed[:, 1])], axis=1)
    tangent = np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)
    normals = np.stack([tangent[:, 1], -tangent[:, 0]], axis=1)
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    return pts, normals


class DiskFamily:
    """t -> Disk(R(t)) with optional analytic derivative R'(t)."""

    def __init__(self, radius: Callable[[float], float], center=None, dim: int = 2,
                 dradius: Callable[[float], float] | None = None):
        self.radius = radius
        self.dradius = dradius
        self.center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
        self.dim = self.center.size

    def __call__(self, t: float) -> Disk:
        return Disk(self.radius(t), self.center, self.dim)


def section_volume(section: CrossSection) -> float:
    vol = float(section.volume())
    if not vol > 0:
        raise ValueError("section has zero volume")
    return vol


def barycenter(section: CrossSection) -> np.ndarray:
    section_volume(section)
    return np.asarray(section.barycenter(), dtype=float)
