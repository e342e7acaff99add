"""End-to-end acceptance criteria; each test prints one PASS/FAIL line."""
import time

import numpy as np
import pytest

from npspec import report
from npspec.effective import ngon_radius
from npspec.faber import grunsky_coefficients, mu_from_map
from npspec.layer import (
    HarmonicPolynomial,
    make_grid,
    single_layer_exterior,
    single_layer_interior_limit,
    transmission_solve,
)
from npspec.laurent import area, boundary_sample, diameter, shoelace_area
from npspec.polarization import MaterialParam, dilation_family, hs_check, pt_extreme, pt_general
from npspec.shapes import ellipse, named_example
from npspec.spectrum import assemble_section, eigenvalues

from .conftest import library_shapes


@pytest.fixture
def say(capsys):
    def emit(label, passed, detail=""):
        with capsys.disabled():
            print(f"\nACCEPTANCE {label}: {'PASS' if passed else 'FAIL'} {detail}")

    return emit


def _finish(say, label, check, budget):
    ok = check.passed and check.seconds < budget
    say(label, ok, f"{check.name} [{check.tolerance}] {check.seconds:.1f}s")
    assert check.passed, check.measured
    assert check.seconds < budget


def test_criterion_1_rectangle(say):
    _finish(say, "1", report.check_rectangle(), 1.0)


def test_criterion_2_ellipse_spectrum(say):
    _finish(say, "2", report.check_ellipse_spectrum(), 5.0)


def test_criterion_3_second_eigenvalue(say):
    c = report.check_second_eigenvalue()
    assert c.measured["full"][5] == pytest.approx(4.7155e-3, abs=5e-8)
    assert c.measured["full"][6] == pytest.approx(4.4402e-3, abs=5e-8)
    _finish(say, "3", c, 600.0)


def test_criterion_4_stopping_protocol(say):
    c = report.check_stopping()
    assert c.measured["stop_step"] == 11
    _finish(say, "4", c, 900.0)


def test_criterion_5_clustering(say):
    _finish(say, "5", report.check_clustering(), 120.0)


def test_criterion_6_monotonicity(say):
    _finish(say, "6", report.check_monotonicity(full=True), 3600.0)


def _property_suite():
    results = {}
    maps = library_shapes()
    theta = 2 * np.pi * np.arange(256) / 256

    results["grunsky identity"] = all(
        np.allclose(g * np.arange(1, 31)[None, :], g.T * np.arange(1, 31)[:, None], atol=1e-10)
        for g in (grunsky_coefficients(m, 30).c_norm for m in maps.values())
    )
    mus = {k: mu_from_map(m, 60).mu for k, m in maps.items()}
    results["mu symmetry"] = all(np.abs(mu - mu.T).max() <= 1e-12 for mu in mus.values())
    results["spectral +- symmetry"] = all(
        np.abs(ev + ev[::-1]).max() <= 1e-12 for ev in (eigenvalues(assemble_section(mu, 60)) for mu in mus.values())
    )
    results["bieberbach"] = all(abs(m.a1) <= m.gamma**2 for m in maps.values())
    results["area vs shoelace"] = all(
        abs(area(m) - shoelace_area(boundary_sample(m, 1 << 16).points)) <= 1e-8 * area(m) for m in maps.values()
    )
    results["gamma in [diam/4, diam]"] = all(diameter(m) / 4 <= m.gamma <= diameter(m) for m in maps.values())

    hs = []
    for m in maps.values():
        for k in (0.0, 0.25, 5.0, np.inf):
            pt = pt_extreme(m, 1 if np.isinf(k) else -1) if k in (0.0, np.inf) else pt_general(m, k)
            hs.append(hs_check(pt, k, area(m))["satisfied"])
    e = ellipse(2.5, 1.0)
    eq = [abs(hs_check(pt_general(e, k), k, area(e))["lower_slack"]) <= 1e-10 for k in (0.25, 5.0)]
    eq += [abs(hs_check(pt_extreme(e, s), k, area(e))["lower_slack"]) <= 1e-10 for s, k in ((1, np.inf), (-1, 0.0))]
    results["hashin-shtrikman slacks"] = all(hs) and all(eq)
    results["trace = +-4 pi gamma^2"] = all(
        np.isclose(pt_extreme(m, s).trace, s * 4 * np.pi * m.gamma**2) for m in maps.values() for s in (1, -1)
    )

    m = named_example("FAMILY4", 20)
    rates = []
    for s in (1, -1):
        eps = np.array([1e-2, 3e-3, 1e-3, 3e-4])
        err = [np.abs(pt_general(m, MaterialParam.from_lambda(s * (0.5 + x))).m - pt_extreme(m, s).m).max() for x in eps]
        rates.append(np.polyfit(np.log(eps), np.log(err), 1)[0])
    results["linear approach to extreme tensor"] = all(abs(r - 1) < 0.05 for r in rates)

    results["single-layer continuity"] = all(
        np.abs(single_layer_interior_limit(m, k, theta) - single_layer_exterior(m, k, m.gamma * np.exp(1j * theta))).max()
        <= 1e-8
        for m in maps.values()
        for k in range(1, 9)
    )

    m = named_example("SMOOTH6")
    M = pt_general(m, 4.0).m
    x = 50 * m.gamma * np.exp(1j * np.linspace(0, 2 * np.pi, 8, endpoint=False))
    grid = make_grid(m, x.real, [0.0])
    grid.points, grid.inside, grid.valid = x[:, None], np.zeros((8, 1), bool), np.ones((8, 1), bool)
    u = transmission_solve(m, 4.0, HarmonicPolynomial.linear(1), 64, grid).values[:, 0]
    slope = (u - x.real) * np.abs(x) ** 2
    predicted = -(np.stack([x.real, x.imag], -1) @ M[:, 0]) / (2 * np.pi)
    results["far field vs tensor"] = bool(np.all(np.abs(slope - predicted) <= 0.01 * np.abs(predicted).max()))

    dil = []
    for m in maps.values():
        pt, summary = dilation_family(m, 100 * m.gamma)
        dil.append(abs(summary["area_times_trace_inverse"] - 1) <= 1e-3)
        dil.append(abs(summary["tau_gap"] - 4 * np.pi * abs(m.a1)) <= 1e-13 * np.abs(pt.eigenvalues).max())
    results["dilation limits"] = all(dil)

    g = np.array([ngon_radius(n) for n in np.linspace(3, 200, 500)])
    results["n-gon gamma monotone, limit"] = bool(np.all(np.diff(g) < 0) and abs(g[-1] - 1 / np.sqrt(np.pi)) <= 1e-3)
    return results


def test_criterion_7_property_suite(say):
    t = time.perf_counter()
    results = _property_suite()
    dt = time.perf_counter() - t
    failed = [k for k, v in results.items() if not v]
    ok = not failed and dt < 600
    say("7", ok, f"property suite ({len(results) - len(failed)}/{len(results)} properties) {dt:.1f}s"
        + (f" failed: {failed}" if failed else ""))
    assert not failed
    assert dt < 600


def test_criterion_8_fdm_cross_check(say):
    _finish(say, "8", report.check_fdm(gridN=1024), 1800.0)
