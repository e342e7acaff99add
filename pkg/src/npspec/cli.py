"""Command-line interface: ``npspec <subcommand> [options]``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import __version__
from .effective import effective_expansion, ngon_coefficients, ngon_effective
from .estimators import check_contrast, check_map
from .exceptions import NPSpecError, ParameterError
from .faber import faber_polynomials, grunsky_coefficients, mu_matrix
from .fdm import effective_fdm, rasterize
from .laurent import area, diameter, dumps, is_simple, to_dict
from .layer import HarmonicPolynomial, make_grid, transmission_solve
from .polarization import pt_extreme, pt_general
from .shapes import parse_polygon
from .spectrum import adaptive_spectrum, assemble_section, eigenvalues

DIGITS = 12


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Fixed 12-significant-digit rendering used by every numeric output."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if np.isnan(x):
        return "nan"
    if np.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = f"{x:.{DIGITS}g}"
    return "0" if s == "-0" else s


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return fmt(x) if not np.isfinite(x) else float(fmt(x))
    return obj


def dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in r])
    return buf.getvalue()


def emit(args, name: str, text: str) -> None:
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)
    else:
        sys.stdout.write(text)


def threads() -> int:
    try:
        n = int(os.environ.get("NPSPEC_THREADS", "0"))
    except ValueError:
        raise UsageError("NPSPEC_THREADS must be an integer")
    return n if n > 0 else (os.cpu_count() or 1)


def parallel_map(fn, items):
    n = min(threads(), max(len(items), 1))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


def parse_k(text: str) -> float:
    try:
        return check_contrast(text).k
    except (NPSpecError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def parse_sweep(text: str) -> np.ndarray:
    try:
        a, b, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected a:b:step")
    if step <= 0 or b < a:
        raise argparse.ArgumentTypeError("need step > 0 and b >= a")
    count = int(np.floor((b - a) / step + 1e-9)) + 1
    return np.round(a + step * np.arange(count), 12)


def _shape(args):
    if not getattr(args, "shape", None):
        raise UsageError("--shape is required")
    return check_map(args.shape)


# subcommands


def cmd_shape(args):
    m = _shape(args)
    if args.out:
        emit(args, "shape.json", dumps(m) + "\n")
    info = {"map": to_dict(m), "area": area(m), "diameter": diameter(m), "simple": is_simple(m)}
    if not args.out:
        sys.stdout.write(dump_json(info))
    return 0


def cmd_faber(args):
    m = _shape(args)
    fs = faber_polynomials(m, args.n or 8)
    rows = []
    for j, p in enumerate(fs.polys):
        for d, c in enumerate(p):
            rows.append((j, d, c.real, c.imag))
    emit(args, "faber.csv", dump_csv(["m", "power", "re", "im"], rows))
    return 0


def cmd_grunsky(args):
    m = _shape(args)
    M = args.n or 8
    g = grunsky_coefficients(m, M)
    mu = mu_matrix(grunsky_coefficients(m, M, M)).mu
    rows = []
    for i in range(g.c.shape[0]):
        for k in range(g.c.shape[1]):
            c = g.c[i, k]
            u = mu[i, k] if k < M else np.nan
            rows.append((i + 1, k + 1, c.real, c.imag, np.real(u), np.imag(u)))
    emit(args, "grunsky.csv", dump_csv(["m", "k", "c_re", "c_im", "mu_re", "mu_im"], rows))
    return 0


def cmd_spectrum(args):
    m = _shape(args)
    kmax = args.kmax or 30
    if args.n:
        ev = eigenvalues(assemble_section(mu_matrix(grunsky_coefficients(m, args.n, args.n)).mu, args.n))
        pos = ev[::-1][:kmax]
        rows = [(k, pos[k - 1], True, False) for k in range(1, len(pos) + 1)]
        emit(args, "spectrum.csv", dump_csv(["k", "lambda", "converged", "floor_flagged"], rows))
        return 0
    res = adaptive_spectrum(m, kmax, max_step=args.max_step, window=args.window, threshold=args.threshold)
    rows = [(k, res.lambdas[k - 1], res.converged[k - 1], res.floor_flagged[k - 1]) for k in range(1, kmax + 1)]
    emit(args, "spectrum.csv", dump_csv(["k", "lambda", "converged", "floor_flagged"], rows))
    if args.out:
        hist = [(s + 1, res.sizes[s], res.max_r()[s - 1] if s else np.nan) for s in range(res.steps_used)]
        emit(args, "spectrum_history.csv", dump_csv(["step", "n", "max_r"], hist))
    else:
        sys.stderr.write(f"steps_used={res.steps_used} stopped={res.stopped}\n")
    return 0


def cmd_pt(args):
    m = _shape(args)
    mat = check_contrast(args.k)
    if mat.k == 0 or np.isinf(mat.k):
        pt = pt_extreme(m, mat.sign)
        method = "closed_form"
    else:
        pt = pt_general(m, mat, n=args.n, Q=args.Q)
        method = "finite_section"
    out = {"k": fmt(mat.k), "lambda": pt.lam, "M": pt.m, "trace": pt.trace, "eigenvalues": pt.eigenvalues, "method": method}
    emit(args, "pt.json", dump_json(out))
    return 0


def _expansion(args):
    mat = check_contrast(args.k)
    if not (mat.k == 0 or np.isinf(mat.k)):
        raise UsageError("effective expansions need --k 0 or --k inf")
    if args.ngon:
        return ngon_effective(args.ngon, mat.sign), {"ngon": args.ngon}
    return effective_expansion(_shape(args), mat.sign), {"shape": args.shape}


def cmd_effective(args):
    exp, src = _expansion(args)
    order = args.order
    if args.rho_sweep is not None:
        rows = []
        for r in args.rho_sweep:
            s = exp.sigma(r, order)
            rows.append((r, s[0, 0], s[0, 1], s[1, 1]))
        emit(args, "effective.csv", dump_csv(["rho", "s11", "s12", "s22"], rows))
        return 0
    out = dict(src)
    out.update({"k": fmt(check_contrast(args.k).k), "order2": exp.order2, "order4": exp.order4, "order": order})
    if args.ngon:
        c2, c4 = ngon_coefficients(args.ngon)
        out["rho2_coefficient"] = exp.sign * c2
        out["rho4_coefficient"] = c4
    if args.rho is not None:
        out["rho"] = args.rho
        out["sigma"] = exp.sigma(args.rho, order)
    emit(args, "effective.json", dump_json(out))
    return 0


def cmd_field(args):
    m = _shape(args)
    mat = check_contrast(args.k if args.k is not None else 3.0)
    N = args.grid or 64
    L = 1.5 * diameter(m)
    c = m.a0
    xs = c.real + np.linspace(-L / 2, L / 2, N)
    ys = c.imag + np.linspace(-L / 2, L / 2, N)
    grid = make_grid(m, xs, ys)
    n = args.n or max(2 * m.N, 32)
    res = transmission_solve(m, mat, HarmonicPolynomial.linear(args.direction), n, grid)
    z = res.points.ravel()
    rows = zip(z.real, z.imag, res.values.ravel(), res.inside.ravel())
    emit(args, "field.csv", dump_csv(["x", "y", "u", "inside"], [(x, y, u, int(i)) for x, y, u, i in rows]))
    return 0


def fdm_sweep(shape_spec: str, k: float, rhos, gridN: int, order: int = 4):
    """Rows ``(rho, s11_fdm, s22_fdm, s11_asym, s22_asym)``."""
    m = check_map(shape_spec)
    poly = parse_polygon(shape_spec) if isinstance(shape_spec, str) else None
    geom = poly if poly is not None else m
    mat = check_contrast(k)
    exp = effective_expansion(m, mat.sign) if (mat.k == 0 or np.isinf(mat.k)) else None

    def one(r):
        s = effective_fdm(rasterize(geom, r, gridN, mat.k)).sigma_star
        a = exp.sigma(r, order) if exp is not None else np.full((2, 2), np.nan)
        return (r, s[0, 0], s[1, 1], a[0, 0], a[1, 1])

    return parallel_map(one, list(rhos))


def cmd_fdm(args):
    if args.rho_sweep is None and args.rho is None:
        raise UsageError("fdm needs --rho or --rho-sweep")
    rhos = args.rho_sweep if args.rho_sweep is not None else [args.rho]
    shape = args.shape or (f"ngon:{args.ngon}" if args.ngon else None)
    if shape is None:
        raise UsageError("--shape is required")
    k = args.k if args.k is not None else 0.0
    rows = fdm_sweep(shape, k, rhos, args.grid or 256, args.order)
    emit(args, "fdm.csv", dump_csv(["rho", "s11_fdm", "s22_fdm", "s11_asym", "s22_asym"], rows))
    return 0


def cmd_report(args):
    from .report import run_report

    base = Path(args.out or "report")
    outdir = base / time.strftime("%Y%m%d-%H%M%S")
    manifest = run_report(outdir, full=args.full, grid=args.grid or (1024 if args.full else 256),
                          max_step=args.max_step, window=args.window, threshold=args.threshold)
    sys.stdout.write(dump_json({"directory": str(outdir), "passed": manifest["passed"], "total": manifest["total"]}))
    return 0 if manifest["passed"] == manifest["total"] else 1


COMMANDS = {
    "shape": cmd_shape,
    "faber": cmd_faber,
    "grunsky": cmd_grunsky,
    "spectrum": cmd_spectrum,
    "pt": cmd_pt,
    "effective": cmd_effective,
    "field": cmd_field,
    "fdm": cmd_fdm,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--shape", help="JSON shape file or generator:args")
    common.add_argument("--k", type=parse_k, help="contrast: 0, inf or a positive float")
    common.add_argument("--n", type=int, help="section / polynomial order")
    common.add_argument("--Q", type=int, help="boundary quadrature points")
    common.add_argument("--grid", type=int, help="grid points per side")
    common.add_argument("--rho", type=float)
    common.add_argument("--rho-sweep", type=parse_sweep, metavar="A:B:STEP")
    common.add_argument("--kmax", type=int)
    common.add_argument("--out", help="output directory (stdout if omitted)")
    common.add_argument("--threshold", type=float, default=1e-5)
    common.add_argument("--max-step", type=int, default=16)
    common.add_argument("--window", type=int, default=5)
    common.add_argument("--order", type=int, choices=(2, 4), default=4)
    common.add_argument("--ngon", type=int)

    p = argparse.ArgumentParser(prog="npspec", description="NP spectra, polarization tensors and effective conductivities.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "field":
            sp.add_argument("--direction", type=int, choices=(1, 2), default=1)
        if name == "report":
            sp.add_argument("--full", action="store_true", help="full schedules and gridN = 1024")
    return p


def _fail(exc, code):
    payload = {"error": type(exc).__name__, "message": str(exc)}
    residual = getattr(exc, "residual", None)
    if residual is not None:
        payload["residual"] = residual
    sys.stderr.write(dump_json(payload))
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with threadpool_limits(limits=threads()):
            return COMMANDS[args.command](args)
    except (UsageError, ParameterError) as exc:
        return _fail(exc, 2)
    except (NPSpecError, np.linalg.LinAlgError, FloatingPointError) as exc:
        return _fail(exc, 1)


if __name__ == "__main__":
    sys.exit(main())
