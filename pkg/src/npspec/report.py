"""Reproduction checks with reference values, tolerances and data files.

Each ``check_*`` function returns a :class:`Check`; :func:`run_report` runs them
all, writes the data behind every figure and a ``manifest.json``.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .effective import effective_expansion
from .faber import mu_from_map
from .fdm import effective_fdm, rasterize
from .shapes import (
    algebraic,
    ellipse,
    fourier_example,
    named_example,
    rectangle_fixture,
    regular_ngon,
    regular_ngon_polygon,
)
from .spectrum import ROUNDOFF_FLOOR, adaptive_spectrum, assemble_section, cluster_asymptotics, eigenvalues

RECTANGLE_REFERENCE = {
    "plus_order2": [4.0438, 1.4754],
    "plus_order4": [8.1763, 1.0885],
    "minus_order2": [-1.4754, -4.0438],
    "minus_order4": [1.0885, 8.1763],
}
FAMILY2_REFERENCE = {5: 4.7155e-3, 6: 4.4402e-3}
FAMILY4_SAMPLES = tuple(range(1, 42, 5))
FAMILY3_SAMPLES = tuple(range(1, 112, 10))
S_VALUES = tuple(round(0.1 * i, 1) for i in range(1, 10))


@dataclass
class Check:
    name: str
    passed: bool
    tolerance: str
    measured: dict = field(default_factory=dict)
    reference: dict = field(default_factory=dict)
    seconds: float = 0.0
    data: dict = field(default_factory=dict, repr=False)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name} ({self.tolerance}, {self.seconds:.1f}s)"


def _timed(fn):
    def wrapper(*args, **kwargs):
        t = time.perf_counter()
        c = fn(*args, **kwargs)
        c.seconds = time.perf_counter() - t
        return c

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def check_rectangle() -> Check:
    m = rectangle_fixture()
    measured, err = {}, 0.0
    for s, tag in ((1, "plus"), (-1, "minus")):
        e = effective_expansion(m, s)
        for order, mat in (("order2", e.order2), ("order4", e.order4)):
            key = f"{tag}_{order}"
            d = np.diag(mat)
            measured[key] = d.tolist()
            err = max(err, float(np.abs(d - RECTANGLE_REFERENCE[key]).max()), float(abs(mat[0, 1])))
    measured["max_abs_error"] = err
    return Check("rectangle expansion matrices", err <= 5e-4, "|delta| <= 5e-4", measured, RECTANGLE_REFERENCE)


@_timed
def check_ellipse_spectrum(n: int = 100, kmax: int = 10) -> Check:
    m = ellipse(2, 1)
    ev = eigenvalues(assemble_section(mu_from_map(m, n).mu, n))
    k = np.arange(1, kmax + 1)
    exact = (1 / 3) ** k / 2
    pos, neg = ev[::-1][:kmax], ev[:kmax]
    err = float(max(np.abs(pos - exact).max(), np.abs(neg + exact).max()))
    return Check("ellipse spectrum +-(1/3)^k/2", err <= 1e-10, "abs 1e-10",
                 {"max_abs_error": err, "lambda": pos.tolist()}, {"lambda": exact.tolist()})


@_timed
def check_second_eigenvalue(max_step: int = 16, window: int = 5, threshold: float = 1e-5) -> Check:
    full = {j: float(adaptive_spectrum(named_example("FAMILY2", j), 2, max_step=max_step, window=window,
                                       threshold=threshold).lambdas[1]) for j in (5, 6)}
    reduced = {j: float(adaptive_spectrum(named_example("FAMILY2", j), 2, max_step=6, window=window,
                                          threshold=threshold).lambdas[1]) for j in (5, 6)}
    digits_ok = all(float(f"{full[j]:.4e}") == FAMILY2_REFERENCE[j] for j in (5, 6))
    ok = digits_ok and full[5] > full[6] and reduced[5] > reduced[6]
    return Check("second eigenvalue ordering of the two-term family", ok, "4 significant digits",
                 {"full": full, "reduced_step6": reduced}, {"lambda2": FAMILY2_REFERENCE})


@_timed
def check_stopping(max_step: int = 16, window: int = 5, threshold: float = 1e-5) -> Check:
    res = adaptive_spectrum(named_example("SMOOTH6"), 30, max_step=max_step, window=window, threshold=threshold)
    # the decay plot runs over the full schedule
    hist = adaptive_spectrum(named_example("SMOOTH6"), 30, max_step=max_step, window=max_step, threshold=0.0)
    steps = np.arange(2, hist.steps_used + 1)
    maxr = hist.max_r()
    sel = steps <= 11
    slope = float(np.polyfit(steps[sel], np.log(np.maximum(maxr[sel], 1e-300)), 1)[0])
    ok = abs(res.steps_used - 11) <= 1 and slope < 0
    return Check("stopping step for the smooth six-term domain", ok, "step 11 +- 1, slope < 0",
                 {"stop_step": res.steps_used, "log_slope": slope}, {"stop_step": 11},
                 data={"steps": steps.tolist(), "max_r": maxr.tolist()})


def cluster_period(lam: np.ndarray, candidates=range(2, 9)) -> int:
    """Period ``p`` minimizing the spread of ``log(lambda_{k+p} / lambda_k)``."""
    L = np.log(lam[lam > 0])
    best, score = None, np.inf
    span = len(L) - max(candidates)
    for p in candidates:
        d = L[p : p + span] - L[:span]
        if np.std(d) < score:
            best, score = p, np.std(d)
    return best


@_timed
def check_clustering(delta: float = 0.02, ms=(3, 4, 5)) -> Check:
    measured, ok = {}, True
    for m in ms:
        lam = adaptive_spectrum(algebraic(m, delta), 30).lambdas
        pred = np.concatenate([cluster_asymptotics(m, delta)[:m], [0.0]])
        err = float(np.abs(lam[: m + 1] - pred).max())
        p = cluster_period(lam)
        measured[m] = {"max_error": err, "cluster_size": p}
        ok &= err <= 10 * delta**2 and p == m + 1
    return Check("eigenvalue clustering for z + delta/z^m", bool(ok), "error <= 10 delta^2, size m+1", measured,
                 {m: {"cluster_size": m + 1} for m in ms})


def _monotone(rows, floor=ROUNDOFF_FLOOR):
    """Count violations of strict increase down each column above the floor."""
    lam = np.array([r.lambdas for r in rows])
    flagged = np.array([r.floor_flagged for r in rows])
    bad = 0
    for a, b, fa, fb in zip(lam[:-1], lam[1:], flagged[:-1], flagged[1:]):
        keep = (a > floor) & (b > floor) & ~fa & ~fb
        bad += int(np.sum(~(b[keep] > a[keep])))
    return bad


@_timed
def check_monotonicity(full: bool = True, max_step: int = 16, window: int = 5, threshold: float = 1e-5) -> Check:
    kmax = 30 if full else 10
    svals = S_VALUES if full else (0.1, 0.5, 0.9)
    family4 = FAMILY4_SAMPLES if full else FAMILY4_SAMPLES[::4]
    family3 = FAMILY3_SAMPLES if full else FAMILY3_SAMPLES[::5]
    kw = dict(max_step=max_step, window=window, threshold=threshold)
    families = {f"fourier_m{m}": [fourier_example(m, s) for s in svals] for m in range(1, 7)}
    families["family4"] = [named_example("FAMILY4", j) for j in family4]
    families["family3"] = [named_example("FAMILY3", j) for j in family3]
    measured, data, total = {}, {}, 0
    for name, maps in families.items():
        rows = [adaptive_spectrum(m, kmax, **kw) for m in maps]
        v = _monotone(rows)
        total += v
        measured[name] = v
        data[name] = [r.lambdas.tolist() for r in rows]
    params = {"s": list(svals), "family4_j": list(family4), "family3_j": list(family3), "kmax": kmax}
    return Check("monotonicity of lambda_k along the shape sweeps", total == 0, "zero exceptions",
                 {"violations": measured, **params}, {"violations": 0}, data=data)


@_timed
def check_fdm(gridN: int = 1024, near=(0.05, 0.1, 0.15, 0.2, 0.25), mid=(0.35, 0.4, 0.45)) -> Check:
    """Square inclusion, insulating proxy: FDM against the order-2 and order-4 expansions."""
    poly = regular_ngon_polygon(4, 1.0, np.pi / 4)
    exp = effective_expansion(regular_ngon(4, 1.0, np.pi / 4), -1)
    rows = []
    for r in list(near) + list(mid):
        s = effective_fdm(rasterize(poly, r, gridN, 0.0)).sigma_star
        rows.append((r, s[0, 0], s[1, 1], exp.sigma(r, 4)[0, 0], exp.sigma(r, 2)[0, 0]))
    rows = np.array(rows)
    rel4 = np.abs(rows[:, 1] - rows[:, 3]) / np.abs(rows[:, 1])
    err2 = np.abs(rows[:, 1] - rows[:, 4])
    err4 = np.abs(rows[:, 1] - rows[:, 3])
    n = len(near)
    ok = bool(np.all(rel4[:n] <= 0.03) and np.all(err2[n:] > err4[n:]))
    return Check("finite-difference cross-check on the square", ok,
                 "rel 3% for rho <= 0.25; order-2 error exceeds order-4 error for rho in [0.35, 0.45]",
                 {"rho": rows[:, 0].tolist(), "s11_fdm": rows[:, 1].tolist(), "rel_err_order4": rel4.tolist(),
                  "abs_err_order2": err2.tolist(), "abs_err_order4": err4.tolist(), "gridN": gridN}, {},
                 data={"rows": rows.tolist()})


def _write_csv(path: Path, header, rows):
    from .cli import dump_csv

    path.write_text(dump_csv(header, rows))


def run_report(outdir, full: bool = False, grid: int = 256, max_step: int = 16, window: int = 5,
               threshold: float = 1e-5) -> dict:
    """Run every check, write data files and the manifest into ``outdir``."""
    from .cli import dump_json

    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    kw = dict(max_step=max_step, window=window, threshold=threshold)
    checks = [
        check_rectangle(),
        check_ellipse_spectrum(),
        check_second_eigenvalue(**kw),
        check_stopping(**kw),
        check_clustering(),
        check_monotonicity(full=full, **kw),
        check_fdm(gridN=grid),
    ]
    (out / "rectangle.json").write_text(dump_json(checks[0].measured))
    (out / "second_eigenvalue.json").write_text(dump_json(checks[2].measured))
    st = checks[3].data
    _write_csv(out / "stopping.csv", ["step", "max_r"], zip(st["steps"], st["max_r"]))
    for name, lams in checks[5].data.items():
        _write_csv(out / f"monotonicity_{name}.csv", ["index"] + [f"lambda_{k + 1}" for k in range(len(lams[0]))],
                   [[i + 1] + row for i, row in enumerate(lams)])
    _write_csv(out / "fdm.csv", ["rho", "s11_fdm", "s22_fdm", "s11_asym4", "s11_asym2"], checks[6].data["rows"])
    manifest = {
        "created": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "full": full,
        "checks": [{k: v for k, v in asdict(c).items() if k != "data"} for c in checks],
        "passed": sum(c.passed for c in checks),
        "total": len(checks),
    }
    (out / "manifest.json").write_text(dump_json(manifest))
    return manifest
