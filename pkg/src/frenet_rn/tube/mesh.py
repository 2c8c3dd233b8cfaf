"""Lateral surface of a tube as a triangle mesh (R^3) or a sample grid (higher dimensions)."""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass

import numpy as np

from .core import BOUNDARY_SLACK, TubeSpec, regularity_margin
from .scan import is_closed
from .sections import Disk


@dataclass
class TriangleMesh:
    vertices: np.ndarray  # (V, 3)
    faces: np.ndarray  # (F, 3), 0-based, counterclockwise seen from outside
    warnings: tuple = ()

    def edges(self) -> Counter:
        c = Counter()
        for a, b, d in self.faces:
            for u, v in ((a, b), (b, d), (d, a)):
                c[(min(u, v), max(u, v))] += 1
        return c

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges()) + len(self.faces)

    def boundary_loops(self) -> int:
        """Number of closed cycles formed by edges used by a single face."""
        adj = defaultdict(list)
        for (u, v), k in self.edges().items():
            if k == 1:
                adj[u].append(v)
                adj[v].append(u)
        seen, loops = set(), 0
        for start in adj:
            if start in seen:
                continue
            loops += 1
            stack = [start]
            while stack:
                v = stack.pop()
                if v not in seen:
                    seen.add(v)
                    stack.extend(adj[v])
        return loops

    def face_normals(self) -> np.ndarray:
        p = self.vertices[self.faces]
        return np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])

    def area(self) -> float:
        return float(0.5 * np.sum(np.linalg.norm(self.face_normals(), axis=1)))

    def to_obj(self) -> str:
        lines = [f"v {x:.15g} {y:.15g} {z:.15g}" for x, y, z in self.vertices]
        lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in self.faces]
        return "\n".join(lines) + "\n"


@dataclass
class SampleGrid:
    """Lateral samples H(u, t): ``params`` rows are (u_1..u_{n-1}, t), ``points`` rows y_1..y_{n+1}."""

    params: np.ndarray
    points: np.ndarray
    warnings: tuple = ()

    def header(self):
        k = self.params.shape[1] - 1
        return [f"u{i + 1}" for i in range(k)] + ["t"] + [f"y{i + 1}" for i in range(self.points.shape[1])]

    def rows(self):
        return np.hstack([self.params, self.points])


def _regularity_warnings(spec: TubeSpec, ts) -> tuple:
    bad = []
    for t in ts:
        extent, k1 = regularity_margin(spec, t)
        if extent * k1 > 1.0 + BOUNDARY_SLACK:
            bad.append(float(t))
    if not bad:
        return ()
    return (f"regularity condition fails at {len(bad)} of {len(ts)} t-samples (first t={bad[0]:.6g})",)


def _sphere_directions(angles: np.ndarray, n: int) -> np.ndarray:
    """Hyperspherical coordinates: the last angle runs over [0, 2 pi), the others over [0, pi]."""
    u = np.ones((len(angles), n))
    sin_prod = np.ones(len(angles))
    for i in range(n - 1):
        u[:, i] = sin_prod * np.cos(angles[:, i])
        sin_prod = sin_prod * np.sin(angles[:, i])
    u[:, n - 1] = sin_prod
    return u


def tube_mesh(spec: TubeSpec, resolution=(64, 64)):
    """Sample the lateral surface on a (section boundary x t) grid.

    In R^3 quads are split into triangles and oriented so that face normals
    agree with the section's outward normal carried by the frame. In higher
    dimensions a :class:`SampleGrid` over hyperspherical angles of a disk
    section is returned (with a warning that no mesh is produced).
    """
    m, nt = (resolution, resolution) if np.isscalar(resolution) else resolution
    a, b = spec.interval
    closed = is_closed(spec)
    ts = np.linspace(a, b, nt, endpoint=not closed)
    warnings = _regularity_warnings(spec, ts)
    if spec.n + 1 != 3:
        return _sample_grid(spec, m, ts, warnings)

    rows, outward = [], []
    for t in ts:
        pts, normals = spec.section_at(t).boundary(m)
        app = spec.apparatus(t)
        rows.append(spec.curve.point(t) + spec.offsets(pts) @ app.frame[1:])
        nrm = normals.copy()
        if spec.reflect_first:
            nrm[:, 0] = -nrm[:, 0]
        outward.append(nrm @ app.frame[1:])
    verts = np.vstack(rows)
    outward = np.vstack(outward)
    faces = []
    t_steps = nt if closed else nt - 1
    for k in range(t_steps):
        k2 = (k + 1) % nt
        for i in range(m):
            i2 = (i + 1) % m
            v00, v01, v10, v11 = k * m + i, k * m + i2, k2 * m + i, k2 * m + i2
            faces.append((v00, v01, v11))
            faces.append((v00, v11, v10))
    faces = np.array(faces, dtype=np.int64)
    mesh = TriangleMesh(verts, faces, warnings)
    # orient by majority vote against the carried outward normals
    score = np.einsum("ij,ij->i", mesh.face_normals(), outward[faces].mean(axis=1))
    if np.sum(score < 0) > np.sum(score > 0):
        mesh.faces = faces[:, ::-1].copy()
    return mesh


def _sample_grid(spec: TubeSpec, m: int, ts, warnings) -> SampleGrid:
    n = spec.n
    sec0 = spec.section_at(ts[0])
    if not isinstance(sec0, Disk):
        raise ValueError("sample grids in dimension > 3 need a disk section")
    axes = [np.linspace(0, np.pi, m) for _ in range(n - 2)] + [np.linspace(0, 2 * np.pi, m, endpoint=False)]
    angles = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n - 1)
    dirs = _sphere_directions(angles, n)
    params, points = [], []
    for t in ts:
        sec = spec.section_at(t)
        app = spec.apparatus(t)
        pts = sec.center + sec.radius * dirs
        points.append(spec.curve.point(t) + spec.offsets(pts) @ app.frame[1:])
        params.append(np.column_stack([angles, np.full(len(angles), t)]))
    msg = ("mesh output needs ambient dimension 3; emitted a sample grid",)
    return SampleGrid(np.vstack(params), np.vstack(points), msg + tuple(warnings))
