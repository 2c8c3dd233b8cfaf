"""Numerical injectivity check of a tube map on a parameter grid."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .core import TubeSpec


@dataclass
class ScanReport:
    clean: bool
    pairs: list = field(default_factory=list)  # (param_a, param_b, image distance), closest first
    samples: int = 0
    spatial_threshold: float = 0.0

    def __bool__(self):
        return self.clean


def is_closed(spec: TubeSpec, tol: float = 1e-9) -> bool:
    """True when the axis and its frame agree at both ends of the interval."""
    a, b = spec.interval
    if b <= a:
        return False
    pa, pb = spec.curve.point(a), spec.curve.point(b)
    scale = max(1.0, float(np.max(np.abs(pa))))
    if np.max(np.abs(pa - pb)) > tol * scale:
        return False
    return bool(np.max(np.abs(spec.apparatus(a).frame - spec.apparatus(b).frame)) <= 1e-7)


def _grid_images(spec: TubeSpec, resolution: int, t_resolution: int):
    a, b = spec.interval
    ts = np.linspace(a, b, t_resolution)
    params, images, index = [], [], []
    for k, t in enumerate(ts):
        section = spec.section_at(t)
        lo, hi = section.bbox
        axes = [np.linspace(lo[i], hi[i], resolution) for i in range(section.dim)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, section.dim)
        ids = np.stack(np.meshgrid(*[np.arange(resolution)] * section.dim, indexing="ij"),
                       axis=-1).reshape(-1, section.dim)
        inside = section.contains(mesh)
        pts, ids = mesh[inside], ids[inside]
        app = spec.apparatus(t)
        f = spec.curve.point(t)
        images.append(f + spec.offsets(pts) @ app.frame[1:])
        params.append(np.column_stack([pts, np.full(len(pts), t)]))
        index.append(np.column_stack([ids, np.full(len(pts), k)]))
    return np.vstack(params), np.vstack(images), np.vstack(index)


def injectivity_scan(spec: TubeSpec, resolution: int = 64, t_resolution: int | None = None,
                     separation: int | None = None, spatial_factor: float = 0.25,
                     max_pairs: int = 20) -> ScanReport:
    """Look for distinct parameter points whose images nearly coincide.

    Pairs whose grid indices differ by more than ``separation`` steps in some
    coordinate (default: a quarter of the resolution), yet whose images are
    closer than ``spatial_factor`` times the median nearest-neighbour image
    spacing, are reported. On a closed axis the t index is compared cyclically.
    """
    t_resolution = resolution if t_resolution is None else t_resolution
    separation = max(resolution, t_resolution) // 4 if separation is None else separation
    params, images, index = _grid_images(spec, resolution, t_resolution)
    tree = cKDTree(images)
    # smallest distance from a sample to another sample: the image grid spacing scale
    d, _ = tree.query(images, k=2)
    spacing = float(np.median(d[:, 1]))
    eps = spatial_factor * spacing
    raw = tree.query_pairs(eps, output_type="ndarray")
    if len(raw):
        diff = np.abs(index[raw[:, 0]] - index[raw[:, 1]])
        if is_closed(spec):
            period = t_resolution - 1
            diff[:, -1] = np.minimum(diff[:, -1] % period, period - diff[:, -1] % period)
        far = np.max(diff, axis=1) > separation
        raw = raw[far]
    if not len(raw):
        return ScanReport(True, [], len(images), eps)
    dist = np.linalg.norm(images[raw[:, 0]] - images[raw[:, 1]], axis=1)
    order = np.argsort(dist)[:max_pairs]
    pairs = [(params[raw[i, 0]], params[raw[i, 1]], float(dist[i])) for i in order]
    return ScanReport(False, pairs, len(images), eps)
