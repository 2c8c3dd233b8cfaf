"""Readers and writers for the CSV, JSON and OBJ formats used by the command line."""
from __future__ import annotations

import csv
import io
import json
import math
import sys

import numpy as np

from .curve import CurveSpec
from .errors import CurveSpecError

SCHEMA = 1
DIGITS = 15


def fmt(x) -> str:
    return f"{float(x) + 0.0:.{DIGITS}g}"


def _rounded(obj):
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _rounded(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
        return float(fmt(x))
    return obj


def _sink(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["nan" if (isinstance(v, float) and math.isnan(v)) else fmt(v) for v in row])
    return buf.getvalue()


def json_text(payload: dict) -> str:
    return json.dumps({"schema": SCHEMA, **_rounded(payload)}, indent=2) + "\n"


def write_text(text: str, path=None) -> None:
    fh, close = _sink(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def read_tabulated_csv(path) -> CurveSpec:
    """Tabulated curve from a CSV with header t,x1,...,xn."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise CurveSpecError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if header[0] != "t" or header[1:] != [f"x{i + 1}" for i in range(len(header) - 1)]:
        raise CurveSpecError(f"{path}: header must be t,x1,...,xn")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise CurveSpecError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise CurveSpecError(f"{path}: ragged rows")
    return CurveSpec.tabulated(data[:, 0], data[:, 1:])


def write_tabulated_csv(path, t, points) -> None:
    points = np.asarray(points, dtype=float)
    header = ["t"] + [f"x{i + 1}" for i in range(points.shape[1])]
    write_text(csv_text(header, np.column_stack([t, points])), path)
