"""Gram matrices, wedge norms, the generalized cross product and skew-symmetric normal forms.

Vectors are passed as sequences (or the rows of a 2-D array). Matrices of
frame vectors follow the same convention: row j is the j-th vector.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEPENDENCE_RTOL = 1e-9
PAIRING_RTOL = 1e-8


def _rows(vectors) -> np.ndarray:
    a = np.atleast_2d(np.asarray(vectors, dtype=float))
    if a.size == 0 or a.shape[0] == 0:
        raise ValueError("need at least one vector")
    if a.ndim != 2:
        raise ValueError("vectors must all have the same dimension")
    return a


def gram_matrix(vectors) -> np.ndarray:
    """Matrix of pairwise inner products v_i . v_j."""
    a = _rows(vectors)
    p, n = a.shape
    if p > n:
        raise ValueError(f"{p} vectors in R^{n}: at most {n} allowed")
    g = np.empty((p, p))
    for i in range(p):
        for j in range(i, p):
            g[i, j] = g[j, i] = np.dot(a[i], a[j])
    return g


def wedge_norm(vectors) -> float:
    """Norm of v_1 ^ ... ^ v_p, the p-volume of the parallelepiped they span.

    Equal to sqrt(det(gram_matrix(vectors))). Computed from the R factor of a
    Householder QR decomposition, which avoids squaring the condition number.
    """
    a = _rows(vectors)
    p, n = a.shape
    if p > n:
        raise ValueError(f"{p} vectors in R^{n}: at most {n} allowed")
    r = np.linalg.qr(a.T, mode="r")
    return float(abs(np.prod(np.diag(r))))


def are_independent(vectors, rtol: float = DEPENDENCE_RTOL) -> bool:
    """Scale-invariant independence test: wedge norm above rtol times the product of norms."""
    a = _rows(vectors)
    peak = np.max(np.abs(a), axis=1)
    if np.any(peak == 0.0):
        return False
    # rescale rows before squaring anything so tiny or huge inputs do not underflow
    a = a / peak[:, None]
    a /= np.linalg.norm(a, axis=1)[:, None]
    return wedge_norm(a) > rtol


def cross_product(vectors) -> np.ndarray:
    """Generalized cross product of n-1 vectors in R^n.

    The result w satisfies w . X = det(v_1, ..., v_{n-1}, X) for every X, so
    (v_1, ..., v_{n-1}, w) is positively oriented whenever the inputs are
    independent. Components come from cofactor expansion along the last column.
    """
    a = _rows(vectors)
    p, n = a.shape
    if n < 2 or p != n - 1:
        raise ValueError(f"cross product in R^{n} needs exactly {n - 1} vectors, got {p}")
    cols = a.T  # n x (n-1), columns are the input vectors
    w = np.empty(n)
    for i in range(n):
        minor = np.delete(cols, i, axis=0)
        w[i] = (-1) ** (i + n - 1) * np.linalg.det(minor)
    return w


def frenet_matrix(nu: float, kappas) -> np.ndarray:
    """Skew tridiagonal matrix with (i, i+1) entry nu*kappa_i."""
    if not nu > 0:
        raise ValueError("speed must be positive")
    k = np.asarray(kappas, dtype=float).ravel()
    n = k.size + 1
    m = np.zeros((n, n))
    idx = np.arange(n - 1)
    m[idx, idx + 1] = nu * k
    m[idx + 1, idx] = -nu * k
    return m


@dataclass(frozen=True)
class SkewNormalForm:
    """Orthogonal Q and angles with Q^T M Q = blockdiag([[0, -a_j], [a_j, 0]], 0).

    All angles are positive except in even dimension without kernel, where
    keeping det Q = +1 may force the last (smallest) angle to be negative.
    """

    q: np.ndarray
    angles: tuple
    kernel_dim: int

    @property
    def n(self) -> int:
        return self.q.shape[0]

    def block_matrix(self) -> np.ndarray:
        n = self.n
        nmat = np.zeros((n, n))
        for j, a in enumerate(self.angles):
            nmat[2 * j, 2 * j + 1] = -a
            nmat[2 * j + 1, 2 * j] = a
        return nmat

    def rotation(self, t: float) -> np.ndarray:
        """exp(t N) in block coordinates."""
        e = np.eye(self.n)
        for j, a in enumerate(self.angles):
            c, s = math.cos(a * t), math.sin(a * t)
            e[2 * j:2 * j + 2, 2 * j:2 * j + 2] = [[c, -s], [s, c]]
        return e

    def rotation_integral(self, t: float) -> np.ndarray:
        """Integral of exp(s N) for s from 0 to t, in block coordinates."""
        e = np.eye(self.n) * t
        for j, a in enumerate(self.angles):
            c, s = math.cos(a * t), math.sin(a * t)
            e[2 * j:2 * j + 2, 2 * j:2 * j + 2] = np.array([[s, c - 1.0], [1.0 - c, s]]) / a
        return e


def _group_eigenvalues(w, scale):
    groups, current = [], [0]
    for i in range(1, len(w)):
        if abs(w[i] - w[current[0]]) <= PAIRING_RTOL * scale:
            current.append(i)
        else:
            groups.append(current)
            current = [i]
    groups.append(current)
    return groups


def skew_normal_form(m, tol: float = 1e-10) -> SkewNormalForm:
    """Normal form of a real skew-symmetric matrix from the eigenvectors of m^2.

    Each eigenvalue -a^2 of the symmetric matrix m^2 has an even-dimensional
    eigenspace; every unit vector v in it gives a block with columns v and
    m v / a. Zero eigenvalues give the kernel. Blocks are ordered by
    decreasing angle and det Q is made +1 by a final sign flip.
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("matrix must be square")
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m + m.T), initial=0.0) > tol * scale:
        raise ValueError("matrix is not skew-symmetric within tolerance")
    m = 0.5 * (m - m.T)
    s = m @ m
    s = 0.5 * (s + s.T)
    w, v = np.linalg.eigh(s)  # ascending: most negative (largest angle) first
    wscale = max(float(np.max(np.abs(w))), np.finfo(float).tiny)
    zero_tol = PAIRING_RTOL * max(wscale, 1.0)

    cols, angles, kernel = [], [], []
    for group in _group_eigenvalues(w, max(wscale, 1.0)):
        lam = float(np.mean(w[group]))
        basis = v[:, group]
        if abs(lam) <= zero_tol:
            kernel.extend(basis.T)
            continue
        if lam > 0:
            raise ValueError("m^2 has a positive eigenvalue: matrix is not skew-symmetric")
        a = math.sqrt(-lam)
        chosen = []
        for e in basis.T:
            for c in chosen:
                e = e - np.dot(c, e) * c
            norm = np.linalg.norm(e)
            if norm < 0.5:
                continue
            q1 = e / norm
            q2 = m @ q1 / a
            q2 = q2 - np.dot(q1, q2) * q1
            q2 /= np.linalg.norm(q2)
            chosen.extend([q1, q2])
            cols.extend([q1, q2])
            angles.append(a)
        if len(chosen) != basis.shape[1]:
            raise ValueError("eigenvalues of m^2 could not be paired")
    q = np.column_stack(cols + kernel) if cols or kernel else np.eye(n)
    if np.linalg.det(q) < 0:
        if kernel:
            q[:, -1] = -q[:, -1]
        else:
            q[:, 2 * len(angles) - 1] = -q[:, 2 * len(angles) - 1]
            angles[-1] = -angles[-1]
    return SkewNormalForm(q=q, angles=tuple(angles), kernel_dim=len(kernel))


def skew_exponential(nf: SkewNormalForm, t: float) -> np.ndarray:
    """exp(t M) = Q exp(t N) Q^T for the matrix M with normal form ``nf``."""
    return nf.q @ nf.rotation(t) @ nf.q.T


def _unit_circle_derivative(j: int):
    # d^j/dt^j (cos t, sin t) at t = 0
    return [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][j % 4]


def _check_distinct(a):
    a = [float(x) for x in a]
    if len(a) == 0:
        raise ValueError("need at least one angle")
    if any(x == 0 for x in a):
        raise ValueError("angles must be nonzero")
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if a[i] == a[j]:
                raise ValueError(f"repeated angle {a[i]}")
    return a


def d_matrix(a, b: float | None = None) -> np.ndarray:
    """Derivative matrix d_ij = f^(j)(0) . e_i.

    Here f(t) = (cos a_1 t, sin a_1 t, ..., cos a_m t, sin a_m t[, b t]) with
    unit radii and j = 1, ..., 2m (or 2m + 1 when b is given).
    """
    a = _check_distinct(a)
    m = len(a)
    size = 2 * m + (0 if b is None else 1)
    d = np.zeros((size, size))
    for j in range(1, size + 1):
        c, s = _unit_circle_derivative(j)
        for k, ak in enumerate(a):
            d[2 * k, j - 1] = ak ** j * c
            d[2 * k + 1, j - 1] = ak ** j * s
    if b is not None:
        d[2 * m, 0] = b
    return d


def d_matrix_det_formula(a, b: float | None = None) -> float:
    """Closed form of det(d_matrix(a, b)).

    prod(a_j^3) * prod_{i<j}(a_i^2 - a_j^2)^2 without b, and
    b * prod(a_j^5) * prod_{i<j}(a_i^2 - a_j^2)^2 with b.
    """
    a = _check_distinct(a)
    vander = 1.0
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            vander *= (a[i] ** 2 - a[j] ** 2) ** 2
    if b is None:
        return float(np.prod(np.power(a, 3)) * vander)
    return float(b * np.prod(np.power(a, 5)) * vander)
