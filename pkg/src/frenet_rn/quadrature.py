"""Numerical integration: adaptive 1-D rules, region integrals and sphere integrals.

Sums are accumulated with ``math.fsum`` so results do not depend on the order
in which partial contributions are produced.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import QuadratureError

DEFAULT_SEED = 0x5EED
MAX_DEPTH = 40

# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1] (nonnegative half).
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

KRONROD_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WK[:-1], _WK[::-1]])
# Gauss nodes sit at odd positions of the Kronrod node list.
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __float__(self):
        return float(self.value)


def _evaluate(fn, x, vectorized):
    if vectorized:
        return np.asarray(fn(x), dtype=float).reshape(x.shape)
    return np.array([fn(float(xi)) for xi in x], dtype=float)


def gauss_kronrod(fn, lo, hi, vectorized=False):
    """One Gauss-Kronrod 7-15 panel on [lo, hi]: (kronrod value, |K - G|)."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    fx = _evaluate(fn, mid + half * KRONROD_NODES, vectorized)
    k = half * math.fsum(KRONROD_WEIGHTS * fx)
    g = half * math.fsum(GAUSS_WEIGHTS * fx)
    return k, abs(k - g)


def integrate_1d(fn: Callable, a: float, b: float, tol: float = 1e-10,
                 vectorized: bool = False) -> QuadratureResult:
    """Adaptive Gauss-Kronrod (7-15) quadrature of ``fn`` over [a, b].

    Parameters
    ----------
    fn : callable
        Scalar integrand, or an array-to-array integrand if ``vectorized``.
    a, b : float
        Interval endpoints, ``a <= b``.
    tol : float
        Absolute tolerance. A panel of width w is accepted when its local
        error estimate is below ``tol * w / (b - a)``.
    vectorized : bool
        Evaluate the 15 nodes of a panel in one call.

    Returns
    -------
    QuadratureResult

    Raises
    ------
    QuadratureError
        If a panel has to be bisected more than 40 times.
    """
    if not b >= a:
        raise ValueError(f"need a <= b, got a={a}, b={b}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    width = b - a
    values, errors = [], []
    evaluations = 0
    stack = [(a, b, 0)]
    while stack:
        lo, hi, depth = stack.pop()
        k, err = gauss_kronrod(fn, lo, hi, vectorized)
        evaluations += 15
        allowed = tol * (hi - lo) / width if width > 0 else 0.0
        # panels whose error is at round-off level cannot be improved by bisection
        if err <= allowed or err <= 50 * np.finfo(float).eps * abs(k):
            values.append(k)
            errors.append(err)
            continue
        if depth >= MAX_DEPTH:
            raise QuadratureError(f"maximum subdivision depth {MAX_DEPTH} exceeded near [{lo}, {hi}]")
        mid = 0.5 * (lo + hi)
        stack.append((mid, hi, depth + 1))
        stack.append((lo, mid, depth + 1))
    return QuadratureResult(math.fsum(values), math.fsum(errors), evaluations)


# -- region integrals -------------------------------------------------------

_GL_ORDER = 10


def _fiber_sum(section, integrand, heads, gl_x, gl_w):
    """Integrate along the last coordinate over the section fibers above ``heads``."""
    lo, hi = section.fibers(heads)
    m, nint = lo.shape
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    total = np.zeros(m)
    covered = np.any(half > 0, axis=1)
    for j in range(nint):
        active = half[:, j] > 0
        if not np.any(active):
            continue
        h = heads[active]
        last = mid[active, j][:, None] + half[active, j][:, None] * gl_x[None, :]
        pts = np.concatenate(
            [np.repeat(h[:, None, :], len(gl_x), axis=1), last[:, :, None]], axis=2
        ).reshape(-1, section.dim)
        vals = np.asarray(integrand(pts), dtype=float).reshape(-1, len(gl_x))
        total[active] += half[active, j] * (vals @ gl_w)
    return total, covered


def _grid_pass(section, integrand, cells):
    lo, hi = section.bbox
    n = section.dim
    fibered = hasattr(section, "fibers")
    dims = n - 1 if fibered else n
    if dims == 0:
        heads = np.zeros((1, 0))
        cell_volume = 1.0
    else:
        axes = [lo[i] + (np.arange(cells) + 0.5) * (hi[i] - lo[i]) / cells for i in range(dims)]
        mesh = np.meshgrid(*axes, indexing="ij")
        heads = np.stack([g.ravel() for g in mesh], axis=1)
        cell_volume = float(np.prod((hi[:dims] - lo[:dims]) / cells))
    if fibered:
        gl_x, gl_w = np.polynomial.legendre.leggauss(_GL_ORDER)
        vals, covered = _fiber_sum(section, integrand, heads, gl_x, gl_w)
        accepted = int(np.count_nonzero(covered))
        evals = heads.shape[0] * _GL_ORDER
    else:
        inside = section.contains(heads)
        vals = np.zeros(heads.shape[0])
        if np.any(inside):
            vals[inside] = np.asarray(integrand(heads[inside]), dtype=float)
        accepted = int(np.count_nonzero(inside))
        evals = accepted
    return cell_volume * math.fsum(vals), evals, accepted


def _grid(section, integrand, tol, max_cells=None):
    n = section.dim
    fibered = hasattr(section, "fibers")
    dims = n - 1 if fibered else n
    if max_cells is None:
        # keep the finest pass around a few million evaluation points
        max_cells = int(max(8, min(2 ** 16, (4e6) ** (1.0 / max(dims, 1)))))
    cells = 16
    coarse, evals, accepted = _grid_pass(section, integrand, cells)
    total_evals = evals
    while True:
        cells *= 2
        fine, evals, accepted = _grid_pass(section, integrand, cells)
        total_evals += evals
        if accepted == 0:
            raise QuadratureError("no grid cell fell inside the section")
        # midpoint error is O(h^2): one Richardson step
        value = fine + (fine - coarse) / 3.0
        err = abs(fine - coarse) / 3.0
        if err <= tol or cells * 2 > max_cells or dims == 0:
            return QuadratureResult(value, err, total_evals)
        coarse = fine


def _adaptive(section, integrand, tol):
    """Nested adaptive Gauss-Kronrod for fibered sections of dimension <= 2."""
    lo, hi = section.bbox
    if section.dim == 1:
        return integrate_1d(lambda x: integrand(x[:, None]), lo[0], hi[0], tol, vectorized=True)
    gl_x, gl_w = np.polynomial.legendre.leggauss(_GL_ORDER)
    count = [0]

    half = 0.5 * (hi[0] - lo[0])

    # x = lo + half (1 - cos u) removes square-root behaviour at the bbox ends
    def outer(u):
        u = np.asarray(u, dtype=float)
        heads = (lo[0] + half * (1.0 - np.cos(u)))[:, None]
        count[0] += heads.shape[0] * _GL_ORDER
        return _fiber_sum(section, integrand, heads, gl_x, gl_w)[0] * half * np.sin(u)

    res = integrate_1d(outer, 0.0, math.pi, tol, vectorized=True)
    return QuadratureResult(res.value, res.error_estimate, count[0])


def _monte_carlo(section, integrand, samples, seed):
    rng = np.random.default_rng(seed)
    lo, hi = section.bbox
    pts = lo + (hi - lo) * rng.random((samples, section.dim))
    inside = section.contains(pts)
    if not np.any(inside):
        raise QuadratureError("no Monte Carlo sample fell inside the section")
    vals = np.zeros(samples)
    vals[inside] = np.asarray(integrand(pts[inside]), dtype=float)
    box = float(np.prod(hi - lo))
    mean = math.fsum(vals) / samples
    std = float(np.std(vals, ddof=1))
    return QuadratureResult(box * mean, box * std / math.sqrt(samples), samples)


def integrate_region(section, integrand: Callable, method: str = "grid", tol: float = 1e-8,
                     samples: int = 200_000, seed: int = DEFAULT_SEED,
                     max_cells: int | None = None) -> QuadratureResult:
    """Integrate ``integrand`` over a cross-section.

    Parameters
    ----------
    section
        Object with ``dim``, ``bbox`` (lo, hi arrays) and vectorized ``contains``.
        Sections that also expose ``fibers(heads)`` (intervals of the last
        coordinate above points of the first dim-1 coordinates) are integrated
        exactly along the fibers with Gauss-Legendre.
    integrand : callable
        Maps an (m, dim) array of points to m values.
    method : {"grid", "monte_carlo", "adaptive"}
        ``grid``: midpoint tensor rule over the bounding box with one
        Richardson step, refined until the step-to-step change is below ``tol``.
        ``monte_carlo``: uniform sampling of the box with rejection.
        ``adaptive``: nested Gauss-Kronrod, fibered sections of dimension <= 2.
    """
    if method == "grid":
        return _grid(section, integrand, tol, max_cells)
    if method == "monte_carlo":
        return _monte_carlo(section, integrand, samples, seed)
    if method == "adaptive":
        if section.dim > 2 or not hasattr(section, "fibers"):
            raise ValueError("adaptive region integration needs a fibered section of dimension <= 2")
        return _adaptive(section, integrand, tol)
    raise ValueError(f"unknown region method {method!r}")


# -- sphere integrals -------------------------------------------------------

def sphere_area(n_minus_1: int) -> float:
    """Area of the unit sphere S^{n-1} in R^n."""
    n = n_minus_1 + 1
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def sphere_nodes(n_minus_1: int, nodes: int = 256):
    """Product-rule nodes and weights on S^1 or S^2 (points of shape (m, n))."""
    if n_minus_1 == 1:
        theta = 2 * np.pi * np.arange(nodes) / nodes
        pts = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        return pts, np.full(nodes, 2 * np.pi / nodes)
    if n_minus_1 == 2:
        npol = max(nodes // 2, 2)
        u, wu = np.polynomial.legendre.leggauss(npol)
        phi = 2 * np.pi * np.arange(nodes) / nodes
        uu, pp = np.meshgrid(u, phi, indexing="ij")
        s = np.sqrt(1 - uu ** 2)
        pts = np.stack([uu, s * np.cos(pp), s * np.sin(pp)], axis=-1).reshape(-1, 3)
        w = (wu[:, None] * np.full(nodes, 2 * np.pi / nodes)[None, :]).ravel()
        return pts, w
    raise ValueError("product rules exist only for S^1 and S^2")


def integrate_sphere(n_minus_1: int, integrand: Callable, rule: str = "product",
                     nodes: int = 256, samples: int = 200_000,
                     seed: int = DEFAULT_SEED) -> QuadratureResult:
    """Integrate over the unit sphere S^{n-1} of R^n.

    ``rule="product"``: trapezoid on S^1, Gauss-Legendre in the first
    coordinate times trapezoid in azimuth on S^2. ``rule="monte_carlo"``:
    normalized Gaussian samples taken in antithetic pairs (any dimension).
    The integrand maps an (m, n) array of unit vectors to m values.
    """
    if rule == "product":
        pts, w = sphere_nodes(n_minus_1, nodes)
        vals = np.asarray(integrand(pts), dtype=float)
        value = math.fsum(w * vals)
        return QuadratureResult(value, 0.0, len(w))
    if rule == "monte_carlo":
        # antithetic pairs u, -u: odd integrands integrate to 0 exactly
        rng = np.random.default_rng(seed)
        half = max(samples // 2, 2)
        g = rng.standard_normal((half, n_minus_1 + 1))
        pts = g / np.linalg.norm(g, axis=1, keepdims=True)
        vals = np.asarray(integrand(np.vstack([pts, -pts])), dtype=float)
        pair = 0.5 * (vals[:half] + vals[half:])
        area = sphere_area(n_minus_1)
        mean = math.fsum(pair) / half
        err = area * float(np.std(pair, ddof=1)) / math.sqrt(half)
        return QuadratureResult(area * mean, err, 2 * half)
    raise ValueError(f"unknown sphere rule {rule!r}")
