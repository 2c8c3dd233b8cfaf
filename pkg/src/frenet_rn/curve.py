"""Curves that emit derivative jets t -> (f(t), f'(t), ..., f^(k)(t)).

A jet sample is an array of shape (k + 1, n) whose row j is the j-th
derivative. Closed-form variants are differentiated exactly; tabulated curves
go through a cubic spline and are flagged as approximate.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.interpolate import CubicSpline

from .errors import CurveSpecError, NonRegularError
from .exterior import are_independent
from .quadrature import integrate_1d

MAX_ORDER = 8
VARIANTS = (
    "polynomial",
    "helix",
    "circle",
    "constant_curvature_even",
    "constant_curvature_odd",
    "embedded",
    "tabulated",
)


@dataclass(frozen=True)
class CurveSpec:
    """Serializable description of a curve: a variant tag plus its parameters."""

    variant: str
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"variant": self.variant, "params": _plain(self.params)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "CurveSpec":
        if not isinstance(d, dict) or "variant" not in d:
            raise CurveSpecError("curve spec needs a 'variant' key")
        return cls(d["variant"], dict(d.get("params", {})))

    @classmethod
    def from_json(cls, text: str) -> "CurveSpec":
        return cls.from_dict(json.loads(text))

    # convenience constructors
    @classmethod
    def polynomial(cls, coefficients) -> "CurveSpec":
        """Per-coordinate coefficient lists in ascending powers of t."""
        return cls("polynomial", {"coefficients": [list(map(float, c)) for c in coefficients]})

    @classmethod
    def helix(cls, radius: float = 1.0, slope: float = 1.0) -> "CurveSpec":
        """(radius cos t, radius sin t, slope t)."""
        return cls("helix", {"radius": float(radius), "slope": float(slope)})

    @classmethod
    def circle(cls, radius: float = 1.0) -> "CurveSpec":
        return cls("circle", {"radius": float(radius)})

    @classmethod
    def constant_curvature(cls, angles, radii, drift: float | None = None) -> "CurveSpec":
        params = {"angles": [float(a) for a in angles], "radii": [float(r) for r in radii]}
        if drift is None:
            return cls("constant_curvature_even", params)
        params["drift"] = float(drift)
        return cls("constant_curvature_odd", params)

    @classmethod
    def embedded(cls, inner: "CurveSpec", dimension: int) -> "CurveSpec":
        return cls("embedded", {"curve": inner.to_dict(), "dimension": int(dimension)})

    @classmethod
    def tabulated(cls, t, points) -> "CurveSpec":
        return cls("tabulated", {"t": [float(x) for x in t],
                                 "points": [[float(x) for x in p] for p in points]})


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


class CurveJet:
    """A curve in R^n that returns derivatives up to ``max_order`` at any t.

    ``fn(t, k)`` must return an array of shape (k + 1, n).
    """

    def __init__(self, dimension: int, max_order: int, fn: Callable, approximate: bool = False,
                 spec: CurveSpec | None = None):
        self.dimension = int(dimension)
        self.max_order = int(max_order)
        self._fn = fn
        self.approximate = approximate
        self.spec = spec

    def eval(self, t: float, order: int | None = None) -> np.ndarray:
        k = self.max_order if order is None else int(order)
        if k > self.max_order:
            raise ValueError(f"order {k} exceeds the jet's max order {self.max_order}")
        out = np.asarray(self._fn(float(t), k), dtype=float)
        return out.reshape(k + 1, self.dimension)

    __call__ = eval

    def point(self, t: float) -> np.ndarray:
        return self.eval(t, 0)[0]

    def transformed(self, s, x0=None) -> "CurveJet":
        """Jet of t -> s f(t) + x0 for a linear map s and translation x0."""
        s = np.asarray(s, dtype=float)
        x0 = np.zeros(self.dimension) if x0 is None else np.asarray(x0, dtype=float)

        def fn(t, k):
            out = self.eval(t, k) @ s.T
            out[0] += x0
            return out

        return CurveJet(s.shape[0], self.max_order, fn, self.approximate)

    def reparametrized(self, alpha: float, beta: float) -> "CurveJet":
        """Jet of t -> f(alpha t + beta)."""
        def fn(t, k):
            out = self.eval(alpha * t + beta, k)
            return out * (alpha ** np.arange(k + 1))[:, None]

        return CurveJet(self.dimension, self.max_order, fn, self.approximate)


def _trig_jet(t, k, a, r):
    """Rows j = 0..k of d^j/dt^j (r cos a t, r sin a t)."""
    out = np.empty((k + 1, 2))
    for j in range(k + 1):
        phase = a * t + j * math.pi / 2
        out[j] = r * a ** j * math.cos(phase), r * a ** j * math.sin(phase)
    return out


def _need(params, key, variant):
    if key not in params:
        raise CurveSpecError(f"{variant} curve needs parameter {key!r}")
    return params[key]


def _polynomial_jet(spec, max_order):
    coeffs = _need(spec.params, "coefficients", "polynomial")
    try:
        coeffs = [np.asarray(c, dtype=float).ravel() for c in coeffs]
    except (TypeError, ValueError) as exc:
        raise CurveSpecError("polynomial coefficients must be numeric lists") from exc
    if not coeffs or any(c.size == 0 for c in coeffs):
        raise CurveSpecError("polynomial curve needs a nonempty coefficient list per coordinate")
    derivs = [[c] for c in coeffs]
    for c in derivs:
        for _ in range(max_order):
            c.append(P.polyder(c[-1]) if c[-1].size > 1 else np.zeros(1))

    def fn(t, k):
        return np.array([[P.polyval(t, c[j]) for c in derivs] for j in range(k + 1)])

    return CurveJet(len(coeffs), max_order, fn, spec=spec)


def _helix_jet(spec, max_order):
    r = float(spec.params.get("radius", 1.0))
    c = float(spec.params.get("slope", 1.0))
    if not r > 0:
        raise CurveSpecError("helix radius must be positive")

    def fn(t, k):
        out = np.zeros((k + 1, 3))
        out[:, :2] = _trig_jet(t, k, 1.0, r)
        out[0, 2] = c * t
        if k >= 1:
            out[1, 2] = c
        return out

    return CurveJet(3, max_order, fn, spec=spec)


def _circle_jet(spec, max_order):
    r = float(spec.params.get("radius", 1.0))
    if not r > 0:
        raise CurveSpecError("circle radius must be positive")
    return CurveJet(2, max_order, lambda t, k: _trig_jet(t, k, 1.0, r), spec=spec)


def _constant_curvature_jet(spec, max_order):
    odd = spec.variant == "constant_curvature_odd"
    a = [float(x) for x in _need(spec.params, "angles", spec.variant)]
    r = [float(x) for x in _need(spec.params, "radii", spec.variant)]
    if len(a) != len(r) or not a:
        raise CurveSpecError("angles and radii must be nonempty lists of equal length")
    if any(x <= 0 for x in r):
        raise CurveSpecError("radii must be positive")
    if any(x == 0 for x in a):
        raise CurveSpecError("angles must be nonzero")
    b = None
    if odd:
        b = float(_need(spec.params, "drift", spec.variant))
        if b == 0:
            raise CurveSpecError("drift b must be nonzero for the odd variant")
    n = 2 * len(a) + (1 if odd else 0)

    def fn(t, k):
        out = np.zeros((k + 1, n))
        for j, (aj, rj) in enumerate(zip(a, r)):
            out[:, 2 * j:2 * j + 2] = _trig_jet(t, k, aj, rj)
        if odd:
            out[0, -1] = b * t
            if k >= 1:
                out[1, -1] = b
        return out

    return CurveJet(n, max_order, fn, spec=spec)


def _embedded_jet(spec, max_order):
    inner = make_jet(CurveSpec.from_dict(_need(spec.params, "curve", "embedded")), max_order)
    n = int(_need(spec.params, "dimension", "embedded"))
    if n < inner.dimension:
        raise CurveSpecError("embedding dimension is smaller than the curve's dimension")

    def fn(t, k):
        out = np.zeros((k + 1, n))
        out[:, :inner.dimension] = inner.eval(t, k)
        return out

    return CurveJet(n, max_order, fn, inner.approximate, spec=spec)


def _tabulated_jet(spec, max_order):
    t = np.asarray(_need(spec.params, "t", "tabulated"), dtype=float)
    pts = np.asarray(_need(spec.params, "points", "tabulated"), dtype=float)
    if pts.ndim != 2 or pts.shape[0] != t.size or t.size < 4:
        raise CurveSpecError("tabulated curve needs at least 4 samples with matching t")
    if np.any(np.diff(t) <= 0):
        raise CurveSpecError("tabulated t must be strictly increasing")
    spline = CubicSpline(t, pts, axis=0)
    pieces = [spline] + [spline.derivative(j) for j in range(1, 4)]

    def fn(tt, k):
        out = np.zeros((k + 1, pts.shape[1]))
        for j in range(min(k, 3) + 1):
            out[j] = pieces[j](tt)
        return out

    return CurveJet(pts.shape[1], max_order, fn, approximate=True, spec=spec)


_BUILDERS = {
    "polynomial": _polynomial_jet,
    "helix": _helix_jet,
    "circle": _circle_jet,
    "constant_curvature_even": _constant_curvature_jet,
    "constant_curvature_odd": _constant_curvature_jet,
    "embedded": _embedded_jet,
    "tabulated": _tabulated_jet,
}


def make_jet(spec: CurveSpec, max_order: int = MAX_ORDER) -> CurveJet:
    """Build a jet emitter for ``spec`` with derivatives up to ``max_order`` (at most 8)."""
    if not 1 <= max_order <= MAX_ORDER:
        raise CurveSpecError(f"max_order must be between 1 and {MAX_ORDER}")
    if spec.variant not in _BUILDERS:
        raise CurveSpecError(f"unknown curve variant {spec.variant!r}")
    return _BUILDERS[spec.variant](spec, max_order)


def jet_from_function(fn: Callable, dimension: int, max_order: int = MAX_ORDER) -> CurveJet:
    """Wrap a function ``fn(t, k) -> (k+1, n) array`` as a CurveJet."""
    return CurveJet(dimension, max_order, fn)


def finite_difference_weights(order: int):
    """Central-stencil weights on offsets -order..order for derivatives 0..order.

    Row k holds the weights of the k-th derivative (to be divided by h^k).
    """
    offsets = np.arange(-order, order + 1, dtype=float)
    width = offsets.size
    # Taylor matrix: sum_i w_i o_i^j / j! = delta_jk
    taylor = np.array([offsets ** j / math.factorial(j) for j in range(width)])
    rhs = np.zeros((width, order + 1))
    rhs[np.arange(order + 1), np.arange(order + 1)] = 1.0
    return offsets, np.linalg.solve(taylor, rhs).T


def finite_difference_jet(point_fn: Callable, t: float, order: int, h: float | None = None) -> np.ndarray:
    """Jet sample of ``point_fn`` at t from a central stencil of width 2*order + 1.

    The default step is eps**(1/(order+2)) * (|t| + 1). Truncation error is at
    least O(h^2) for every returned derivative.
    """
    if not 0 <= order <= 5:
        raise ValueError("finite-difference order must be between 0 and 5")
    if h is None:
        h = np.finfo(float).eps ** (1.0 / (order + 2)) * (abs(t) + 1.0)
    if not h > 0:
        raise ValueError("step must be positive")
    if order == 0:
        return np.atleast_2d(np.asarray(point_fn(t), dtype=float))
    offsets, w = finite_difference_weights(order)
    vals = np.array([np.asarray(point_fn(t + o * h), dtype=float) for o in offsets])
    # derivative weights sum to zero, so differencing against the centre is exact for constants
    out = w @ (vals - vals[order])
    out /= (h ** np.arange(order + 1))[:, None]
    out[0] = vals[order]
    return out


def speed(sample) -> float:
    """nu = |f'| from a jet sample."""
    nu = float(np.linalg.norm(np.asarray(sample, dtype=float)[1]))
    if nu == 0.0:
        raise NonRegularError(1, message="zero speed: the curve is not regular here")
    return nu


def arc_length(jet: CurveJet, a: float, b: float, tol: float = 1e-11) -> float:
    """Length of the curve over [a, b] by adaptive quadrature of the speed."""
    if not b >= a:
        raise ValueError("need a <= b")
    return integrate_1d(lambda t: float(np.linalg.norm(jet.eval(t, 1)[1])), a, b, tol).value


def regularity_check(sample, k: int) -> bool:
    """True when f', ..., f^(k) in the jet sample are independent."""
    sample = np.asarray(sample, dtype=float)
    if k >= sample.shape[0]:
        raise ValueError(f"jet sample carries derivatives only up to order {sample.shape[0] - 1}")
    if k > sample.shape[1]:
        return False
    return are_independent(sample[1:k + 1])
