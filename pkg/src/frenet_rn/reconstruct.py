"""Curves from prescribed speed and curvatures.

Integrates V' = M(t) V for the Frenet matrix M, classifies curves of constant
speed and curvatures as products of circles (times a line in odd dimension),
and recovers the rigid motion relating two congruent sampled curves.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import cumulative_simpson

from .curve import CurveSpec, make_jet
from .errors import ClassificationError, CongruenceError
from .exterior import SkewNormalForm, frenet_matrix, skew_normal_form
from .frenet import curvatures


def _as_function(v) -> Callable[[float], float]:
    if callable(v):
        return v
    c = float(v)
    return lambda t: c


@dataclass(frozen=True)
class FrenetPrescription:
    """Speed, curvatures and initial data for the Frenet system.

    ``nu`` and each entry of ``kappas`` may be a constant or a function of t.
    ``initial_frame`` holds V_1..V_n as rows. ``step`` defaults to 1/4000 of
    the interval.
    """

    n: int
    nu: object
    kappas: Sequence
    initial_point: np.ndarray | None = None
    initial_frame: np.ndarray | None = None
    interval: tuple = (0.0, 1.0)
    step: float | None = None
    reorthonormalize: bool = True
    validation_points: int = 257

    def __post_init__(self):
        if len(self.kappas) != self.n - 1:
            raise ValueError(f"need {self.n - 1} curvature functions for n={self.n}")
        p0 = np.zeros(self.n) if self.initial_point is None else np.asarray(self.initial_point, float)
        v0 = np.eye(self.n) if self.initial_frame is None else np.asarray(self.initial_frame, float)
        object.__setattr__(self, "initial_point", p0)
        object.__setattr__(self, "initial_frame", v0)
        if p0.shape != (self.n,) or v0.shape != (self.n, self.n):
            raise ValueError("initial point/frame have the wrong shape")

    def nu_at(self, t: float) -> float:
        return float(_as_function(self.nu)(t))

    def kappas_at(self, t: float) -> np.ndarray:
        return np.array([_as_function(k)(t) for k in self.kappas], dtype=float)

    def matrix(self, t: float) -> np.ndarray:
        return frenet_matrix(self.nu_at(t), self.kappas_at(t))

    def is_constant(self) -> bool:
        return not callable(self.nu) and not any(callable(k) for k in self.kappas)

    def validate(self) -> None:
        t0, t1 = self.interval
        if not t1 > t0:
            raise ValueError("interval must have t1 > t0")
        if self.step is not None and not self.step > 0:
            raise ValueError("step must be positive")
        v0 = self.initial_frame
        if np.max(np.abs(v0 @ v0.T - np.eye(self.n))) > 1e-9:
            raise ValueError("initial frame is not orthonormal")
        if np.linalg.det(v0) < 0:
            raise ValueError("initial frame is negatively oriented")
        for t in np.linspace(t0, t1, self.validation_points):
            if not self.nu_at(t) > 0:
                raise ValueError(f"speed is not positive at t={t:.15g}")
            k = self.kappas_at(t)
            # a zero tail (kappa_j = ... = kappa_{n-1} = 0) is a curve in a lower-dimensional subspace
            nz = np.nonzero(k)[0]
            tail = nz[-1] + 1 if nz.size else 0
            bad = np.nonzero(k[:min(tail, self.n - 2)] <= 0)[0]
            if bad.size:
                raise ValueError(f"kappa_{bad[0] + 1} is not positive at t={t:.15g}")


@dataclass(frozen=True)
class SampledCurve:
    """Curve samples with their frame field: frames[i, j] is V_{j+1}(t_i)."""

    t: np.ndarray
    points: np.ndarray
    frames: np.ndarray

    def rows(self, with_frame: bool = True) -> np.ndarray:
        cols = [self.t[:, None], self.points]
        if with_frame:
            cols.append(self.frames.reshape(len(self.t), -1))
        return np.hstack(cols)

    def header(self, with_frame: bool = True) -> list:
        n = self.points.shape[1]
        names = ["t"] + [f"x{i + 1}" for i in range(n)]
        if with_frame:
            names += [f"V{j + 1}_{i + 1}" for j in range(n) for i in range(n)]
        return names

    def frame_drift(self) -> float:
        """max over samples of |V V^T - I|."""
        n = self.points.shape[1]
        g = np.einsum("kij,klj->kil", self.frames, self.frames)
        return float(np.max(np.abs(g - np.eye(n))))


def _mgs_rows(v: np.ndarray) -> np.ndarray:
    """Re-orthonormalize the rows in order; the first row keeps its direction."""
    out = np.empty_like(v)
    for i in range(v.shape[0]):
        w = v[i].copy()
        for j in range(i):
            w -= np.dot(out[j], w) * out[j]
        out[i] = w / np.linalg.norm(w)
    return out


def _grid(p: FrenetPrescription):
    t0, t1 = p.interval
    step = (t1 - t0) / 4000 if p.step is None else p.step
    count = max(1, int(round((t1 - t0) / step)))
    return np.linspace(t0, t1, count + 1)


def _curve_from_tangent(p, t, frames):
    speeds = np.array([p.nu_at(x) for x in t])
    velocity = speeds[:, None] * frames[:, 0, :]
    return p.initial_point + cumulative_simpson(velocity, x=t, axis=0, initial=0.0)


def integrate_frenet(p: FrenetPrescription) -> SampledCurve:
    """Classical RK4 on V' = M(t) V with optional per-step re-orthonormalization.

    The curve is initial_point + integral of nu V_1, accumulated with
    Simpson's rule on the same grid.
    """
    p.validate()
    t = _grid(p)
    frames = np.empty((t.size, p.n, p.n))
    v = p.initial_frame.copy()
    frames[0] = v
    for i in range(t.size - 1):
        h = t[i + 1] - t[i]
        tm = t[i] + 0.5 * h
        m0, mh, m1 = p.matrix(t[i]), p.matrix(tm), p.matrix(t[i + 1])
        k1 = m0 @ v
        k2 = mh @ (v + 0.5 * h * k1)
        k3 = mh @ (v + 0.5 * h * k2)
        k4 = m1 @ (v + h * k3)
        v = v + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if p.reorthonormalize:
            v = _mgs_rows(v)
        frames[i + 1] = v
    return SampledCurve(t, _curve_from_tangent(p, t, frames), frames)


def integrate_frenet_constant(p: FrenetPrescription, t: np.ndarray | None = None) -> SampledCurve:
    """Exact solution V(t) = exp((t - t0) M) V(0) for constant speed and curvatures.

    The curve integral of nu V_1 is also done in closed form through the
    normal form of M.
    """
    if not p.is_constant():
        raise ValueError("closed-form integration needs constant speed and curvatures")
    t = _grid(p) if t is None else np.asarray(t, dtype=float)
    t0 = p.interval[0]
    m = p.matrix(t0)
    nf = skew_normal_form(m)
    q, v0 = nf.q, p.initial_frame
    nu = p.nu_at(t0)
    frames = np.array([q @ nf.rotation(x - t0) @ q.T @ v0 for x in t])
    points = np.array([p.initial_point + nu * (q @ nf.rotation_integral(x - t0) @ q.T @ v0)[0]
                       for x in t])
    return SampledCurve(t, points, frames)


@dataclass(frozen=True)
class ConstantCurvatureParams:
    """Model curve (r_1 e^{i a_1 t}, ..., r_m e^{i a_m t}[, b t]) in real coordinates.

    In even dimension a negative last angle encodes the mirror-image model,
    which is how a negative top curvature is represented.
    """

    angles: tuple
    radii: tuple
    drift: float | None = None

    def __post_init__(self):
        a = [float(x) for x in self.angles]
        r = [float(x) for x in self.radii]
        object.__setattr__(self, "angles", tuple(a))
        object.__setattr__(self, "radii", tuple(r))
        if len(a) != len(r):
            raise ValueError("angles and radii must have equal length")
        if any(x <= 0 for x in r):
            raise ValueError("radii must be positive")
        if any(x <= 0 for x in a[:-1]) or (a and a[-1] == 0):
            raise ValueError("angles must be positive (the last may be negative in even dimension)")
        if self.drift is not None and a and a[-1] < 0:
            raise ValueError("a negative angle is only used in even dimension")
        mags = [abs(x) for x in a]
        if len(set(mags)) != len(mags):
            raise ValueError("angles must be pairwise distinct")
        if self.drift is not None and self.drift == 0:
            raise ValueError("drift must be nonzero")

    @property
    def n(self) -> int:
        return 2 * len(self.angles) + (0 if self.drift is None else 1)

    @property
    def speed(self) -> float:
        b = 0.0 if self.drift is None else self.drift
        return float(np.sqrt(sum((a * r) ** 2 for a, r in zip(self.angles, self.radii)) + b * b))


def realize_constant(params: ConstantCurvatureParams) -> CurveSpec:
    """Curve specification of the model curve for ``params``."""
    return CurveSpec.constant_curvature(params.angles, params.radii, params.drift)


def _model_curvatures(params):
    return curvatures(make_jet(realize_constant(params), params.n)(0.0))


def classify_constant(n: int, nu: float, kappas, rtol: float = 1e-8) -> ConstantCurvatureParams:
    """Angles, radii and drift of the model curve with the given constant speed and curvatures.

    The angles are those of the normal form of the Frenet matrix M. Starting
    from the canonical frame, the tangent is V_1(t) = exp(-t M) e_1, so each
    invariant 2-plane of M carries a circle of radius nu |P_j e_1| / a_j and
    the kernel carries the drift nu (e_1 . q_kernel). The orientation of the
    model (sign of b, or a mirrored last block in even dimension) is matched
    to the sign of kappa_{n-1}.
    """
    kappas = np.asarray(kappas, dtype=float).ravel()
    if n < 2 or kappas.size != n - 1:
        raise ClassificationError(f"need n >= 2 and n-1 curvatures, got n={n}, {kappas.size}")
    if not nu > 0:
        raise ClassificationError("speed must be positive")
    if np.any(kappas[:-1] <= 0):
        raise ClassificationError("kappa_j must be positive for j <= n-2")
    if kappas[-1] == 0:
        raise ClassificationError("kappa_{n-1} = 0: the curve lies in a lower-dimensional subspace")
    nf: SkewNormalForm = skew_normal_form(frenet_matrix(nu, kappas))
    angles = [abs(a) for a in nf.angles]
    expected_kernel = n % 2
    if nf.kernel_dim != expected_kernel or 2 * len(angles) + nf.kernel_dim != n:
        raise ClassificationError("degenerate spectrum: repeated angles, the trace lies in a lower-dimensional subspace")
    for i in range(len(angles) - 1):
        if angles[i] - angles[i + 1] <= rtol * angles[0]:
            raise ClassificationError("repeated angles a_i = a_j: the curve is not (n-1)-regular")
    c = nf.q[0]  # components of e_1 in the normal-form basis
    radii = [nu * np.hypot(c[2 * j], c[2 * j + 1]) / angles[j] for j in range(len(angles))]
    if min(radii) <= rtol * max(radii):
        raise ClassificationError("the tangent has no component in some invariant plane")
    drift = None
    if expected_kernel:
        drift = float(nu * c[-1])
        if abs(drift) <= rtol * nu:
            raise ClassificationError("zero drift: kappa_{n-1} would be undefined")
    params = ConstantCurvatureParams(tuple(angles), tuple(radii), drift)
    model = _model_curvatures(params)
    if np.sign(model[-1]) != np.sign(kappas[-1]):
        if drift is not None:
            params = ConstantCurvatureParams(tuple(angles), tuple(radii), -drift)
        else:
            params = ConstantCurvatureParams(tuple(angles[:-1]) + (-angles[-1],), tuple(radii))
        model = _model_curvatures(params)
    if np.max(np.abs(model - kappas)) > 1e-6 * max(1.0, float(np.max(np.abs(kappas)))):
        raise ClassificationError("model curve does not reproduce the curvatures")
    return params


@dataclass(frozen=True)
class Congruence:
    """Rigid motion x -> s x + x0 taking one sampled curve onto another."""

    s: np.ndarray
    x0: np.ndarray
    residual: float

    def apply(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.s.T + self.x0


def congruence_transform(f_samples, g_samples, f_frame0, g_frame0, t=None,
                         tol: float = 1e-9) -> Congruence:
    """Isometry fixed by the frames at the first sample: S maps f's frame onto g's.

    Frames are given with V_j as rows. Raises CongruenceError naming the
    worst sample when max |S f + X0 - g| exceeds ``tol``.
    """
    f = np.asarray(f_samples, dtype=float)
    g = np.asarray(g_samples, dtype=float)
    if f.shape != g.shape:
        raise ValueError("sample sets must share the parameter grid")
    s = np.asarray(g_frame0, dtype=float).T @ np.asarray(f_frame0, dtype=float)
    x0 = g[0] - s @ f[0]
    res = np.linalg.norm(f @ s.T + x0 - g, axis=1)
    worst = int(np.argmax(res))
    tt = np.arange(len(f), dtype=float) if t is None else np.asarray(t, dtype=float)
    if res[worst] > tol:
        raise CongruenceError(float(res[worst]), float(tt[worst]))
    return Congruence(s, x0, float(res[worst]))
