"""Frenet apparatus (speed, curvatures, frame) of a curve in R^n with arbitrary parameter.

All functions take a jet sample: an array whose row j is f^(j)(t), with at
least the rows 0..n. Curvatures come from norms of the wedge products
L_m = f' ^ f'' ^ ... ^ f^(m); the last curvature is signed through the
generalized cross product.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonRegularError
from .exterior import are_independent, cross_product, wedge_norm


@dataclass(frozen=True)
class FrenetApparatus:
    nu: float
    kappas: np.ndarray
    frame: np.ndarray  # row j is V_{j+1}

    @property
    def n(self) -> int:
        return self.frame.shape[0]


def _sample(jet_sample, need: int | None = None) -> np.ndarray:
    s = np.asarray(jet_sample, dtype=float)
    if s.ndim != 2:
        raise ValueError("jet sample must be a 2-D array of derivatives")
    n = s.shape[1]
    need = n if need is None else need
    if s.shape[0] < need + 1:
        raise ValueError(f"jet sample must carry derivatives up to order {need}")
    if n < 2:
        raise ValueError("curves must live in R^n with n >= 2")
    return s


def _wedge_norms(s: np.ndarray, top: int) -> list:
    """[1, nu, |L_2|, ..., |L_top|], raising if some L_m is degenerate."""
    nu = float(np.linalg.norm(s[1]))
    if nu == 0.0:
        raise NonRegularError(1)
    norms = [1.0, nu]
    for m in range(2, top + 1):
        if not are_independent(s[1:m + 1]):
            raise NonRegularError(m)
        norms.append(wedge_norm(s[1:m + 1]))
    return norms


def curvatures(jet_sample) -> np.ndarray:
    """kappa_1, ..., kappa_{n-1} from ratios of wedge norms.

    kappa_m = |L_{m-1}| |L_{m+1}| / (nu |L_m|^2) for m <= n-2, and
    kappa_{n-1} = |L_{n-2}| ((f' x ... x f^(n-1)) . f^(n)) / (nu |L_{n-1}|^2),
    which carries the orientation sign.
    """
    s = _sample(jet_sample)
    n = s.shape[1]
    L = _wedge_norms(s, n - 1)
    nu = L[1]
    k = np.empty(n - 1)
    for m in range(1, n - 1):
        k[m - 1] = L[m - 1] * L[m + 1] / (nu * L[m] ** 2)
    top = np.dot(cross_product(s[1:n]), s[n])
    k[n - 2] = L[n - 2] * top / (nu * L[n - 1] ** 2)
    return k


def curvatures_chain(jet_sample) -> np.ndarray:
    """Curvatures by the recursive chain kappa_m = |L_{m+1}| / (nu^{m+1} kappa_1...kappa_{m-1} |L_m|).

    Kept as an independent check of :func:`curvatures`.
    """
    s = _sample(jet_sample)
    n = s.shape[1]
    L = _wedge_norms(s, n - 1)
    nu = L[1]
    k = np.empty(n - 1)
    prod = 1.0
    for m in range(1, n - 1):
        k[m - 1] = L[m + 1] / (nu ** (m + 1) * prod * L[m])
        prod *= k[m - 1]
    top = np.dot(cross_product(s[1:n]), s[n])
    k[n - 2] = top / (nu ** n * prod * L[n - 1])
    return k


def _gram_schmidt(vectors) -> np.ndarray:
    """Modified Gram-Schmidt with one reorthogonalization pass."""
    out = []
    for v in np.asarray(vectors, dtype=float):
        w = v.copy()
        for _ in range(2):
            for q in out:
                w -= np.dot(q, w) * q
        out.append(w / np.linalg.norm(w))
    return np.array(out)


def frame(jet_sample) -> np.ndarray:
    """Frenet frame V_1..V_n as rows.

    V_1..V_{n-1} orthonormalize f'..f^(n-1) so that f^(m) . V_m > 0;
    V_n is the cross product of the others, completing a positive basis.
    """
    s = _sample(jet_sample, need=None)
    n = s.shape[1]
    _wedge_norms(s, n - 1)
    head = _gram_schmidt(s[1:n])
    last = cross_product(head)
    return np.vstack([head, last / np.linalg.norm(last)])


def apparatus(jet_sample) -> FrenetApparatus:
    s = _sample(jet_sample)
    return FrenetApparatus(float(np.linalg.norm(s[1])), curvatures(s), frame(s))


def classical_frenet3(jet_sample):
    """(T, N, B, kappa, tau) of a space curve from the ordinary cross product."""
    s = _sample(jet_sample, need=3)
    if s.shape[1] != 3:
        raise ValueError("classical Frenet formulas need a curve in R^3")
    d1, d2, d3 = s[1], s[2], s[3]
    nu = np.linalg.norm(d1)
    c = np.cross(d1, d2)
    cn = np.linalg.norm(c)
    if nu == 0.0:
        raise NonRegularError(1)
    if cn <= 1e-9 * nu * np.linalg.norm(d2):
        raise NonRegularError(2)
    T = d1 / nu
    B = c / cn
    N = np.cross(B, T)
    return T, N, B, cn / nu ** 3, np.dot(c, d3) / cn ** 2


def speed_derivatives(jet_sample):
    """(nu, nu', nu'') from the jet: nu' = f'.f''/nu, nu'' = (f''.f'' + f'.f''' - nu'^2)/nu."""
    s = np.asarray(jet_sample, dtype=float)
    d1, d2, d3 = s[1], s[2], s[3]
    nu = np.linalg.norm(d1)
    if nu == 0.0:
        raise NonRegularError(1)
    dnu = np.dot(d1, d2) / nu
    ddnu = (np.dot(d2, d2) + np.dot(d1, d3) - dnu ** 2) / nu
    return float(nu), float(dnu), float(ddnu)


def kappa1_derivative(jet_sample) -> float:
    """d kappa_1 / dt = (nu^3 f''.f''' - nu'(2|f'^f''|^2 + nu^3 nu'')) / (nu^4 |f'^f''|)."""
    s = _sample(jet_sample, need=3)
    nu, dnu, ddnu = speed_derivatives(s)
    if not are_independent(s[1:3]):
        raise NonRegularError(2)
    w = wedge_norm(s[1:3])
    num = nu ** 3 * np.dot(s[2], s[3]) - dnu * (2 * w ** 2 + nu ** 3 * ddnu)
    return float(num / (nu ** 4 * w))


def principal_normal(jet_sample) -> np.ndarray:
    """V_2 = (nu f'' - nu' f') / |f' ^ f''|."""
    s = _sample(jet_sample, need=2)
    nu = np.linalg.norm(s[1])
    dnu = np.dot(s[1], s[2]) / nu
    if not are_independent(s[1:3]):
        raise NonRegularError(2)
    return (nu * s[2] - dnu * s[1]) / wedge_norm(s[1:3])


def first_three_frame_vectors(jet_sample) -> np.ndarray:
    """V_1, V_2, V_3 by forward substitution in the lower-triangular system

        f'   = nu V_1
        f''  = nu' V_1 + nu^2 k1 V_2
        f''' = (nu'' - nu^3 k1^2) V_1 + (k1' nu^2 + 3 k1 nu' nu) V_2 + nu^3 k1 k2 V_3

    with k2 the second curvature (taken from :func:`curvatures` in R^n, n >= 4,
    or the signed torsion for n = 3).
    """
    s = _sample(jet_sample, need=3)
    n = s.shape[1]
    if n < 3:
        raise ValueError("needs a curve in R^n with n >= 3")
    nu, dnu, ddnu = speed_derivatives(s)
    if n == 3:
        k1, k2 = curvatures(s)
    else:
        L = _wedge_norms(s, 3)
        k1 = L[2] / nu ** 3
        k2 = L[1] * L[3] / (nu * L[2] ** 2)
    dk1 = kappa1_derivative(s)
    v1 = s[1] / nu
    v2 = (s[2] - dnu * v1) / (nu ** 2 * k1)
    v3 = (s[3] - (ddnu - nu ** 3 * k1 ** 2) * v1 - (dk1 * nu ** 2 + 3 * k1 * dnu * nu) * v2) / (
        nu ** 3 * k1 * k2)
    return np.array([v1, v2, v3])


def independent_order(jet_sample) -> int:
    """Largest k such that f', ..., f^(k) are independent (0 if f' = 0)."""
    s = np.asarray(jet_sample, dtype=float)
    n = s.shape[1]
    k = 0
    while k < min(n, s.shape[0] - 1) and are_independent(s[1:k + 2]):
        k += 1
    return k


def extended_apparatus(jet_sample, m: int | None = None) -> FrenetApparatus:
    """Apparatus of a curve whose trace lies in an m-dimensional affine subspace.

    The first m frame vectors come from the curve's own derivatives; the frame
    is completed by Gram-Schmidt on the canonical basis (giving the constant
    canonical complement for zero-padded curves) and the remaining curvatures
    are 0. If f', ..., f^(n-1) are independent this is :func:`apparatus`.
    ``m`` defaults to the number of independent leading derivatives.
    """
    s = np.asarray(jet_sample, dtype=float)
    n = s.shape[1]
    k = independent_order(s) if m is None else int(m)
    if k >= n - 1:
        return apparatus(s)
    nu = float(np.linalg.norm(s[1]))
    if k < 1:
        raise NonRegularError(1)
    L = _wedge_norms(s, k)
    kappas = np.zeros(n - 1)
    for j in range(1, k):
        kappas[j - 1] = L[j - 1] * L[j + 1] / (nu * L[j] ** 2)
    vecs = list(_gram_schmidt(s[1:k + 1]))
    for e in np.eye(n):
        if len(vecs) == n:
            break
        w = e.copy()
        for _ in range(2):
            for q in vecs:
                w -= np.dot(q, w) * q
        if np.linalg.norm(w) > 1e-6:
            vecs.append(w / np.linalg.norm(w))
    fr = np.array(vecs)
    if np.linalg.det(fr) < 0:
        fr[-1] = -fr[-1]
    return FrenetApparatus(nu, kappas, fr)
