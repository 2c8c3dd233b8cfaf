"""Tube map, Jacobian, regularity checks and tube volumes.

A tube around an axis f in R^{n+1} places the section point X (in R^n) at
G(X, t) = f(t) + sum_j (x_j - p_j) V_{j+1}(t), where P = (p_1, ..., p_n) is
the attachment point. With ``reflect_first`` the first section coordinate is
mirrored, i.e. -V_2 is used in place of V_2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..curve import CurveJet, arc_length
from ..errors import TubeRegularityError
from ..frenet import FrenetApparatus, extended_apparatus
from ..quadrature import integrate_1d, integrate_region
from .sections import CrossSection, section_volume, unit_ball_volume

REGULARITY_T_SAMPLES = 1024
# extent * kappa_1 == 1 only touches the section boundary, where the Jacobian may vanish
BOUNDARY_SLACK = 1e-12


@dataclass(frozen=True)
class TubeSpec:
    curve: CurveJet
    interval: tuple
    section: object  # CrossSection or callable t -> CrossSection
    attach: tuple | None = None
    reflect_first: bool = False

    def __post_init__(self):
        n = self.curve.dimension - 1
        p = np.zeros(n) if self.attach is None else np.asarray(self.attach, dtype=float)
        if p.shape != (n,):
            raise ValueError(f"attachment point must have {n} coordinates")
        object.__setattr__(self, "attach", tuple(float(x) for x in p))
        if self.constant_section and self.section.dim != n:
            raise ValueError(f"section must be {n}-dimensional for a curve in R^{n + 1}")
        a, b = self.interval
        if not b >= a:
            raise ValueError("interval must satisfy a <= b")
        object.__setattr__(self, "interval", (float(a), float(b)))

    @property
    def n(self) -> int:
        return self.curve.dimension - 1

    @property
    def sign(self) -> float:
        return -1.0 if self.reflect_first else 1.0

    @property
    def constant_section(self) -> bool:
        return isinstance(self.section, CrossSection)

    def section_at(self, t: float) -> CrossSection:
        return self.section if self.constant_section else self.section(t)

    def apparatus(self, t: float) -> FrenetApparatus:
        order = min(self.curve.max_order, self.curve.dimension)
        return extended_apparatus(self.curve.eval(t, order))

    def offsets(self, x) -> np.ndarray:
        d = np.asarray(x, dtype=float) - np.asarray(self.attach)
        if self.reflect_first:
            d = d.copy()
            d[..., 0] = -d[..., 0]
        return d


def tube_map(spec: TubeSpec, x, t: float) -> np.ndarray:
    """G(X, t); ``x`` may be one section point or an (m, n) array."""
    app = spec.apparatus(t)
    f = spec.curve.point(t)
    return f + spec.offsets(x) @ app.frame[1:]


def tube_jacobian(spec: TubeSpec, x, t: float):
    """nu(t) |1 - (x_1 - p_1) kappa_1(t)| (with x_1 mirrored when reflect_first)."""
    app = spec.apparatus(t)
    d = spec.offsets(x)
    return app.nu * np.abs(1.0 - d[..., 0] * app.kappas[0])


def regularity_radius(curve: CurveJet, interval, samples: int = 512) -> float:
    """1 / max kappa_1 over the interval: grid maximum refined by golden-section search."""
    a, b = (float(v) for v in interval)
    order = min(curve.max_order, curve.dimension)

    def k1(t):
        return float(extended_apparatus(curve.eval(t, order)).kappas[0])

    ts = np.linspace(a, b, samples)
    vals = np.array([k1(t) for t in ts])
    i = int(np.argmax(vals))
    best = vals[i]
    if samples > 2 and b > a:
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, samples - 1)]
        g = (math.sqrt(5) - 1) / 2
        c, d = hi - g * (hi - lo), lo + g * (hi - lo)
        fc, fd = k1(c), k1(d)
        while hi - lo > 1e-10 * max(1.0, abs(hi)):
            if fc > fd:
                hi, d, fd = d, c, fc
                c = hi - g * (hi - lo)
                fc = k1(c)
            else:
                lo, c, fc = c, d, fd
                d = lo + g * (hi - lo)
                fd = k1(d)
        best = max(best, fc, fd)
    if best <= 1e-14:
        return math.inf
    return float(1.0 / best)


def regularity_margin(spec: TubeSpec, t: float):
    """(extent, kappa_1) where extent is the largest signed offset along V_2 in the section at t."""
    section = spec.section_at(t)
    lo, hi = section.extent(0)
    p1 = spec.attach[0]
    extent = (hi - p1) if not spec.reflect_first else (p1 - lo)
    return extent, float(spec.apparatus(t).kappas[0])


def check_regularity(spec: TubeSpec, samples: int = REGULARITY_T_SAMPLES) -> float:
    """Verify (x_1 - p_1) kappa_1 < 1 inside every section on a t-grid.

    The condition is affine in x_1, so only the section's extreme first
    coordinate matters. Equality at the boundary (the disk of radius 1/kappa_1)
    is accepted. Returns the largest value of extent * kappa_1 seen.
    """
    a, b = spec.interval
    worst = -math.inf
    for t in np.linspace(a, b, samples):
        extent, k1 = regularity_margin(spec, t)
        value = extent * k1
        if value > 1.0 + BOUNDARY_SLACK:
            raise TubeRegularityError(float(t), extent, k1)
        worst = max(worst, value)
    return worst


def _region_method(section):
    if hasattr(section, "fibers") and section.dim <= 2:
        return "adaptive"
    return "grid"


def section_moments(section: CrossSection, method: str | None = None, tol: float = 1e-11):
    """(integral of 1, integral of x_1) over the section by region quadrature."""
    method = method or _region_method(section)
    if method == "grid":
        tol = max(tol, 1e-9)
    m0 = integrate_region(section, lambda x: np.ones(len(x)), method=method, tol=tol).value
    m1 = integrate_region(section, lambda x: x[:, 0], method=method, tol=tol).value
    return m0, m1


def tube_volume(spec: TubeSpec, tol: float = 1e-9, method: str | None = None,
                check: bool = True) -> float:
    """Volume of the tube by nested quadrature.

    integral over t of nu [vol S_t - kappa_1 (int_{S_t} x_1 - p_1 vol S_t)],
    with section integrals from region quadrature (cached per t).
    """
    if check:
        check_regularity(spec)
    a, b = spec.interval
    p1 = spec.attach[0]
    cache = {}

    def moments(t):
        if spec.constant_section:
            t = None
        if t not in cache:
            cache[t] = section_moments(spec.section_at(0.0 if t is None else t), method)
        return cache[t]

    def integrand(t):
        app = spec.apparatus(t)
        m0, m1 = moments(t)
        return app.nu * (m0 - spec.sign * app.kappas[0] * (m1 - p1 * m0))

    return integrate_1d(integrand, a, b, tol).value


def curvature_integral(curve: CurveJet, interval, tol: float = 1e-11) -> float:
    """Integral of nu kappa_1 (total curvature) over the interval."""
    order = min(curve.max_order, curve.dimension)

    def integrand(t):
        app = extended_apparatus(curve.eval(t, order))
        return app.nu * app.kappas[0]

    return integrate_1d(integrand, *interval, tol=tol).value


def tube_volume_closed_form(spec: TubeSpec, tol: float = 1e-11) -> float:
    """vol S * l + vol S (p_1 - C_1) * integral of nu kappa_1, for a constant section."""
    if not spec.constant_section:
        raise ValueError("closed form needs a constant section")
    vol = section_volume(spec.section)
    c1 = float(spec.section.barycenter()[0])
    length = arc_length(spec.curve, *spec.interval, tol=tol)
    return vol * length + spec.sign * vol * (spec.attach[0] - c1) * curvature_integral(
        spec.curve, spec.interval, tol)


def pappus_volume(section: CrossSection, curve: CurveJet, interval, tol: float = 1e-11) -> float:
    """vol(S) * length(f, I): the volume of a tube whose section is carried by its barycenter."""
    return section_volume(section) * arc_length(curve, *interval, tol=tol)


@dataclass(frozen=True)
class DiskTubeVolume:
    value: float
    max_radius: float
    regularity_radius: float
    exceeds_regularity_radius: bool

    def __float__(self):
        return float(self.value)


def disk_tube_volume(radius, curve: CurveJet, interval, tol: float = 1e-11,
                     samples: int = 512) -> DiskTubeVolume:
    """vol(B^n) * integral of nu R^n, for disks of radius R(t) centred on the axis.

    The result carries a warning flag when R exceeds the radius of curvature
    somewhere on a sampling grid.
    """
    rfun: Callable = radius if callable(radius) else (lambda t, r=float(radius): r)
    n = curve.dimension - 1
    a, b = (float(v) for v in interval)

    def integrand(t):
        return float(np.linalg.norm(curve.eval(t, 1)[1])) * rfun(t) ** n

    value = unit_ball_volume(n) * integrate_1d(integrand, a, b, tol).value
    rmax = max(rfun(t) for t in np.linspace(a, b, samples))
    rho = regularity_radius(curve, (a, b), samples)
    return DiskTubeVolume(value, rmax, rho, bool(rmax >= rho))
