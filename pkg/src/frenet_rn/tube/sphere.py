"""Sphere tubes: hypersurfaces swept by spheres of radius R(t) in the normal spaces of the axis."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ..curve import CurveJet, arc_length
from ..errors import TubeRegularityError
from ..frenet import FrenetApparatus, extended_apparatus
from ..quadrature import DEFAULT_SEED, integrate_1d, integrate_sphere
from .sections import sphere_volume

FD_STEP = 1e-5


def _radius_functions(radius, dradius):
    if not callable(radius):
        r = float(radius)
        return (lambda t: r), (lambda t: 0.0)
    if dradius is not None:
        return radius, dradius

    def central(t):
        h = FD_STEP * (1.0 + abs(t))
        return (radius(t + h) - radius(t - h)) / (2 * h)

    return radius, central


def sphere_tube_area(curve: CurveJet, interval, radius, tol: float = 1e-10,
                     dradius: Callable | None = None, nodes: int = 256,
                     check_samples: int = 1024, seed: int = DEFAULT_SEED) -> float:
    """Lateral area of the sphere tube by the area element

        R^{n-1} sqrt(nu^2 (1 - phi_1 R kappa_1)^2 + R'^2) dS dt

    integrated over the unit sphere S^{n-1} (phi = sphere point) and t.
    R' is analytic when ``dradius`` is given, else a central difference.
    """
    rfun, drfun = _radius_functions(radius, dradius)
    n = curve.dimension - 1
    a, b = (float(v) for v in interval)
    order = min(curve.max_order, curve.dimension)

    def app(t):
        return extended_apparatus(curve.eval(t, order))

    for t in np.linspace(a, b, check_samples):
        k1 = float(app(t).kappas[0])
        if rfun(t) * k1 >= 1.0:
            raise TubeRegularityError(float(t), rfun(t), k1)

    rule = "product" if n - 1 in (1, 2) else "monte_carlo"

    def integrand(t):
        ap = app(t)
        r, dr = rfun(t), drfun(t)
        nu, k1 = ap.nu, float(ap.kappas[0])

        def element(u):
            return r ** (n - 1) * np.sqrt(nu ** 2 * (1 - u[:, 0] * r * k1) ** 2 + dr ** 2)

        return integrate_sphere(n - 1, element, rule=rule, nodes=nodes, seed=seed).value

    return integrate_1d(integrand, a, b, tol).value


def sphere_tube_pappus(curve: CurveJet, interval, radius: float, tol: float = 1e-11) -> float:
    """vol(S^{n-1}(R)) * length(f, I) for a constant radius."""
    n = curve.dimension - 1
    return sphere_volume(n - 1, radius) * arc_length(curve, *interval, tol=tol)


def sphere_tube_point(app: FrenetApparatus, f: np.ndarray, u, radius: float) -> np.ndarray:
    """H = f + R sum_j phi_j V_{j+1} for a unit vector phi in R^n."""
    return f + radius * np.asarray(u, dtype=float) @ app.frame[1:]


def sphere_tube_gauss_map(app: FrenetApparatus, u, radius: float, dradius: float) -> np.ndarray:
    """Outward unit normal of the sphere tube at the point given by phi = u.

    N is the normalization of H_0 + lam V_1 with H_0 = R sum phi_j V_{j+1}
    and lam = R R' / (nu (phi_1 R kappa_1 - 1)), signed so that N . H_0 > 0.
    """
    u = np.asarray(u, dtype=float)
    k1 = float(app.kappas[0])
    den = u[0] * radius * k1 - 1.0
    if den >= 0:
        raise TubeRegularityError(math.nan, radius * u[0], k1)
    h0 = radius * u @ app.frame[1:]
    lam = radius * dradius / (app.nu * den)
    v = h0 + lam * app.frame[0]
    v = v / np.linalg.norm(v)
    return v if np.dot(v, h0) > 0 else -v
