"""Command line: curvatures, reconstruction and tube computations.

Exit codes: 0 success, 1 configuration error, 2 regularity failure,
3 tube-regularity violation.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from . import io as fio
from .curve import MAX_ORDER, CurveJet, CurveSpec, jet_from_function, make_jet
from .errors import (ClassificationError, CongruenceError, CurveSpecError, NonRegularError,
                     TubeRegularityError)
from .frenet import apparatus, extended_apparatus
from .reconstruct import (FrenetPrescription, classify_constant, congruence_transform,
                          integrate_frenet, integrate_frenet_constant)
from .tube import (Disk, DiskFamily, ParabolicRegion, Polygon, TubeSpec, check_regularity,
                   disk_tube_volume, pappus_volume, sphere_tube_area, sphere_tube_pappus,
                   tube_volume, tube_volume_closed_form)
from .tube.helix import helix_collision_witness
from .tube.mesh import tube_mesh
from .tube.scan import injectivity_scan

EXIT_OK, EXIT_CONFIG, EXIT_REGULARITY, EXIT_TUBE = 0, 1, 2, 3

T = sp.Symbol("t", real=True)
_TRANSFORMS = standard_transformations + (convert_xor,)


class ConfigError(ValueError):
    pass


# -- parsing helpers --------------------------------------------------------

def sym(text: str):
    try:
        return parse_expr(str(text), local_dict={"t": T, "pi": sp.pi, "e": sp.E},
                          transformations=_TRANSFORMS)
    except Exception as exc:  # sympy raises a zoo of types on bad input
        raise ConfigError(f"cannot parse expression {text!r}: {exc}") from None


def number(text) -> float:
    if isinstance(text, (int, float)):
        return float(text)
    e = sym(text)
    if e.free_symbols:
        raise ConfigError(f"expected a number, got {text!r}")
    return float(e)


def numbers(text, sep=",") -> list:
    if isinstance(text, (list, tuple)):
        return [number(x) for x in text]
    return [number(x) for x in split_top(str(text), sep)]


def split_top(text: str, sep: str = ",") -> list:
    """Split on ``sep`` outside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return [x for x in out if x]


def interval(text) -> tuple:
    if isinstance(text, (list, tuple)):
        a, b = text
    else:
        parts = str(text).split(":")
        if len(parts) != 2:
            raise ConfigError(f"interval must look like a:b, got {text!r}")
        a, b = parts
    a, b = number(a), number(b)
    if not b >= a:
        raise ConfigError("interval needs a <= b")
    return a, b


def scalar_function(text):
    """(f, f') as numeric callables of t for an expression in t."""
    e = sym(text)
    f = sp.lambdify(T, e, "math")
    df = sp.lambdify(T, sp.diff(e, T), "math")
    return (lambda t: float(f(t))), (lambda t: float(df(t)))


def _components(body: str) -> list:
    body = body.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    return [sym(c) for c in split_top(body)]


def expression_jet(exprs, max_order: int = MAX_ORDER) -> CurveJet:
    """Jet of a curve given by sympy expressions in t (derivatives taken symbolically)."""
    table = [[sp.diff(e, T, k) for e in exprs] for k in range(max_order + 1)]
    fns = [sp.lambdify(T, row, "math") for row in table]

    def fn(t, k):
        return np.array([fns[j](t) for j in range(k + 1)], dtype=float)

    return jet_from_function(fn, len(exprs), max_order)


def parse_curve_spec(text: str):
    """CurveSpec, or None for expression curves that have no spec variant."""
    text = str(text).strip()
    if text.endswith(".json") and os.path.exists(text):
        with open(text) as fh:
            return CurveSpec.from_json(fh.read())
    kind, _, rest = text.partition(":")
    if kind == "poly":
        coeffs = []
        for e in _components(rest):
            if not e.free_symbols <= {T}:
                raise ConfigError(f"unexpected symbols in {e}")
            try:
                poly = sp.Poly(e, T)
            except sp.PolynomialError:
                raise ConfigError(f"{e} is not a polynomial in t") from None
            coeffs.append([float(c) for c in reversed(poly.all_coeffs())])
        return CurveSpec.polynomial(coeffs)
    if kind == "helix":
        vals = numbers(rest) if rest else [1.0, 1.0]
        return CurveSpec.helix(*vals)
    if kind == "circle":
        return CurveSpec.circle(number(rest) if rest else 1.0)
    if kind == "constant":
        groups = rest.split("/")
        if len(groups) not in (2, 3):
            raise ConfigError("constant curve: constant:a1,a2/r1,r2[/b]")
        drift = number(groups[2]) if len(groups) == 3 else None
        return CurveSpec.constant_curvature(numbers(groups[0]), numbers(groups[1]), drift)
    if kind == "embed":
        dim, _, inner = rest.partition(":")
        spec = parse_curve_spec(inner)
        if spec is None:
            raise ConfigError("only named curve variants can be embedded")
        return CurveSpec.embedded(spec, int(dim))
    if kind == "tabulated":
        return fio.read_tabulated_csv(rest)
    if kind == "expr":
        return None
    raise ConfigError(f"unknown curve {text!r}")


def parse_curve(text: str) -> CurveJet:
    spec = parse_curve_spec(text)
    if spec is None:
        return expression_jet(_components(str(text).partition(":")[2]))
    return make_jet(spec)


def parse_section(text: str, n: int):
    kind, _, rest = str(text).strip().partition(":")
    if kind == "disk":
        return Disk(number(rest), dim=n)
    if kind == "parabolic":
        return ParabolicRegion(*(numbers(rest) if rest else []))
    if kind == "polygon":
        return Polygon([numbers(v) for v in rest.split(";")])
    if kind == "square":
        side = number(rest) if rest else 1.0
        return Polygon([[0, 0], [side, 0], [side, side], [0, side]])
    if kind == "radius":
        r, dr = scalar_function(rest)
        return DiskFamily(r, dim=n, dradius=dr)
    raise ConfigError(f"unknown section {text!r}")


# -- commands ---------------------------------------------------------------

def _sample_times(args) -> np.ndarray:
    if args.at is not None:
        return np.array(numbers(args.at))
    a, b = interval(args.interval or "0:1")
    return np.linspace(a, b, int(args.samples or 11))


def cmd_curvatures(args) -> int:
    jet = parse_curve(_require(args, "curve"))
    n = jet.dimension
    ts = _sample_times(args)
    rows, ok = [], 0
    for t in ts:
        sample = jet.eval(t, min(jet.max_order, n))
        try:
            app = extended_apparatus(sample) if args.extended else apparatus(sample)
            row = [t, app.nu, *app.kappas]
            if args.frame:
                row += list(app.frame.ravel())
            rows.append(row + [1])
            ok += 1
        except NonRegularError as exc:
            print(f"t={fio.fmt(t)}: {exc}", file=sys.stderr)
            width = 1 + (n - 1) + (n * n if args.frame else 0)
            rows.append([t] + [math.nan] * width + [0])
    header = ["t", "nu"] + [f"kappa{j + 1}" for j in range(n - 1)]
    if args.frame:
        header += [f"V{j + 1}_{i + 1}" for j in range(n) for i in range(n)]
    header.append("regular")
    if (args.format or "csv") == "json":
        payload = {"command": "curvatures", "columns": header, "rows": rows}
        fio.write_text(fio.json_text(payload), args.out)
    else:
        fio.write_text(fio.csv_text(header, rows), args.out)
    return EXIT_OK if ok else EXIT_REGULARITY


def _function_list(text) -> list:
    items = text if isinstance(text, (list, tuple)) else split_top(str(text))
    out = []
    for item in items:
        e = sym(item)
        if e.free_symbols:
            f = sp.lambdify(T, e, "math")
            out.append(lambda t, f=f: float(f(t)))
        else:
            out.append(float(e))
    return out


def _matrix(text) -> np.ndarray:
    if isinstance(text, (list, tuple)):
        return np.array([numbers(r) for r in text])
    return np.array([numbers(r) for r in str(text).split(";")])


def cmd_reconstruct(args) -> int:
    kappas = _function_list(_require(args, "kappas"))
    nu = _function_list(args.nu if args.nu is not None else "1")[0]
    n = int(args.n) if args.n is not None else len(kappas) + 1
    if args.classify:
        if callable(nu) or any(callable(k) for k in kappas):
            raise ConfigError("classification needs constant speed and curvatures")
        params = classify_constant(n, nu, kappas)
        payload = {"command": "classify", "n": n, "nu": nu, "kappas": kappas,
                   "a": list(params.angles), "r": list(params.radii), "b": params.drift}
        fio.write_text(fio.json_text(payload), args.out)
        return EXIT_OK
    p = FrenetPrescription(
        n, nu, kappas,
        initial_point=None if args.initial_point is None else numbers(args.initial_point),
        initial_frame=None if args.initial_frame is None else _matrix(args.initial_frame),
        interval=interval(args.interval or "0:1"),
        step=None if args.step is None else number(args.step),
        reorthonormalize=not args.no_reorthonormalize,
    )
    curve = integrate_frenet_constant(p) if args.exact else integrate_frenet(p)
    points, frames = curve.points, curve.frames
    if args.align_to:
        target = parse_curve(args.align_to)
        if target.dimension != n:
            raise ConfigError("alignment target must live in the same dimension")
        g = np.array([target.point(t) for t in curve.t])
        g0 = apparatus(target.eval(curve.t[0], min(target.max_order, n))).frame
        cong = congruence_transform(points, g, frames[0], g0, curve.t, tol=math.inf)
        points = cong.apply(points)
        frames = frames @ cong.s.T
        print(f"max deviation from target: {fio.fmt(cong.residual)}", file=sys.stderr)
    with_frame = bool(args.frame)
    rows = [curve.t[:, None], points] + ([frames.reshape(len(curve.t), -1)] if with_frame else [])
    fio.write_text(fio.csv_text(curve.header(with_frame), np.hstack(rows)), args.out)
    return EXIT_OK


def _tube_spec(args) -> TubeSpec:
    jet = parse_curve(_require(args, "curve"))
    section = parse_section(_require(args, "section"), jet.dimension - 1)
    attach = None if args.attach is None else numbers(args.attach)
    return TubeSpec(jet, interval(_require(args, "interval")), section, attach,
                    reflect_first=bool(args.reflect))


def cmd_tube(args) -> int:
    mode = args.mode or "volume"
    tol = number(args.tol) if args.tol is not None else 1e-9
    if tol <= 0:
        raise ConfigError("tol must be positive")
    seed = int(args.seed) if args.seed is not None else None
    payload = {"command": "tube", "mode": mode}
    if mode == "witness":
        w = helix_collision_witness(number(_require(args, "radius")))
        payload.update(P1={"x": w.P1[0], "t": w.P1[1]}, P2={"x": w.P2[0], "t": w.P2[1]},
                       image=w.image, residual=w.residual, s0=w.s0)
        fio.write_text(fio.json_text(payload), None if args.format == "obj" else args.out)
        return EXIT_OK
    spec = _tube_spec(args)
    if mode == "volume":
        payload["regularity_max"] = check_regularity(spec)
        payload["volume"] = tube_volume(spec, tol=tol, check=False)
        if spec.constant_section:
            payload["closed_form"] = tube_volume_closed_form(spec)
    elif mode == "pappus":
        if not spec.constant_section:
            raise ConfigError("pappus mode needs a constant section")
        payload["volume"] = pappus_volume(spec.section, spec.curve, spec.interval)
    elif mode == "disk":
        sec = spec.section
        radius = sec.radius if isinstance(sec, DiskFamily) else getattr(sec, "radius", None)
        if radius is None:
            raise ConfigError("disk mode needs a disk or radius: section")
        res = disk_tube_volume(radius, spec.curve, spec.interval, tol=min(tol, 1e-11))
        payload.update(volume=res.value, max_radius=res.max_radius,
                       regularity_radius=res.regularity_radius,
                       exceeds_regularity_radius=res.exceeds_regularity_radius)
    elif mode == "area":
        sec = spec.section
        if isinstance(sec, DiskFamily):
            radius, dradius = sec.radius, sec.dradius
        elif isinstance(sec, Disk):
            radius, dradius = sec.radius, None
        else:
            raise ConfigError("area mode needs a disk or radius: section")
        kw = {} if seed is None else {"seed": seed}
        payload["area"] = sphere_tube_area(spec.curve, spec.interval, radius, tol=tol,
                                           dradius=dradius, **kw)
        if isinstance(sec, Disk):
            payload["pappus"] = sphere_tube_pappus(spec.curve, spec.interval, radius)
    elif mode == "mesh":
        res = int(args.resolution or 64)
        mesh = tube_mesh(spec, (res, res))
        payload["warnings"] = list(mesh.warnings)
        if hasattr(mesh, "faces"):
            if args.out:
                fio.write_text(mesh.to_obj(), args.out)
            payload.update(path=args.out, vertices=len(mesh.vertices), faces=len(mesh.faces),
                           euler_characteristic=mesh.euler_characteristic(),
                           boundary_loops=mesh.boundary_loops(), area=mesh.area())
            if args.format == "obj" and not args.out:
                fio.write_text(mesh.to_obj())
                return EXIT_OK
        else:
            if args.out:
                fio.write_text(fio.csv_text(mesh.header(), mesh.rows()), args.out)
            payload.update(path=args.out, samples=len(mesh.points))
        fio.write_text(fio.json_text(payload))
        return EXIT_OK
    elif mode == "scan":
        rep = injectivity_scan(spec, int(args.resolution or 64))
        payload.update(clean=rep.clean, samples=rep.samples,
                       spatial_threshold=rep.spatial_threshold,
                       pairs=[{"a": a, "b": b, "distance": d} for a, b, d in rep.pairs])
    else:
        raise ConfigError(f"unknown tube mode {mode!r}")
    fio.write_text(fio.json_text(payload), args.out)
    return EXIT_OK


# -- argument handling ------------------------------------------------------

def _require(args, name):
    value = getattr(args, name)
    if value is None:
        raise ConfigError(f"--{name.replace('_', '-')} is required")
    return value


def _flag(p, *names, **kw):
    # defaults stay None so that --config values can fill the gaps
    p.add_argument(*names, default=None, **kw)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; here 2 means a non-regular curve
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="frenet-rn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        _flag(p, "--config", help="JSON file of option values (command-line flags win)")
        _flag(p, "--interval", help="parameter interval a:b")
        _flag(p, "--tol", help="tolerance")
        _flag(p, "--out", help="output path (default stdout)")
        _flag(p, "--format", choices=["csv", "json", "obj"])
        _flag(p, "--seed", help="seed for Monte Carlo paths")

    p = sub.add_parser("curvatures", help="speed, curvatures and frame along a curve")
    common(p)
    _flag(p, "--curve", help="poly:(t,t^2,...), expr:(...), helix[:r,c], circle:R, "
                              "constant:a/r[/b], embed:N:<curve>, tabulated:file.csv or file.json")
    _flag(p, "--at", help="comma-separated parameter values")
    _flag(p, "--samples", help="number of samples over --interval")
    _flag(p, "--frame", action="store_const", const=True, help="add frame columns")
    _flag(p, "--extended", action="store_const", const=True,
          help="complete the frame for curves in a lower-dimensional subspace")

    p = sub.add_parser("reconstruct", help="integrate the Frenet system")
    common(p)
    _flag(p, "--n", help="dimension (default: number of curvatures + 1)")
    _flag(p, "--nu", help="speed expression in t")
    _flag(p, "--kappas", help="comma-separated curvature expressions in t")
    _flag(p, "--initial-point", dest="initial_point")
    _flag(p, "--initial-frame", dest="initial_frame", help="rows V1;V2;... of comma-separated numbers")
    _flag(p, "--step", help="RK4 step")
    _flag(p, "--no-reorthonormalize", dest="no_reorthonormalize", action="store_const", const=True)
    _flag(p, "--exact", action="store_const", const=True,
          help="closed-form solution for constant speed and curvatures")
    _flag(p, "--frame", action="store_const", const=True)
    _flag(p, "--align-to", dest="align_to", help="curve to move the result onto")
    _flag(p, "--classify", action="store_const", const=True,
          help="report the model-curve parameters a, r, b as JSON")

    p = sub.add_parser("tube", help="tube volumes, areas, meshes and injectivity checks")
    common(p)
    _flag(p, "--curve")
    _flag(p, "--section", help="disk:R, parabolic[:w,a,c], polygon:x,y;x,y;..., square[:s], radius:EXPR")
    _flag(p, "--attach", help="attachment point p1,...,pn in section coordinates")
    _flag(p, "--reflect", action="store_const", const=True, help="mirror the first section coordinate")
    _flag(p, "--mode", choices=["volume", "pappus", "disk", "area", "mesh", "scan", "witness"])
    _flag(p, "--resolution", help="grid resolution for mesh and scan")
    _flag(p, "--radius", help="disk radius for the helix collision witness")
    return parser


def _merge_config(args) -> None:
    if args.config is None:
        return
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    for key, value in cfg.items():
        key = key.replace("-", "_")
        if key in ("command", "config"):
            continue
        if not hasattr(args, key):
            raise ConfigError(f"unknown config key {key!r}")
        if getattr(args, key) is None:
            setattr(args, key, value)


COMMANDS = {"curvatures": cmd_curvatures, "reconstruct": cmd_reconstruct, "tube": cmd_tube}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args)
        return COMMANDS[args.command](args)
    except TubeRegularityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TUBE
    except (NonRegularError, ClassificationError, CongruenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGULARITY
    except (ConfigError, CurveSpecError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
