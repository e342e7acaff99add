import mpmath
import numpy as np
import pytest

from npspec.effective import (
    a_functionals,
    a_inverse_trace_bound,
    effective_expansion,
    maxwell_garnett,
    ngon_coefficients,
    ngon_effective,
    ngon_radius,
)
from npspec.exceptions import DiluteRegimeError, ParameterError, SingularTensorError
from npspec.laurent import LaurentMap, area, transform
from npspec.polarization import pt_extreme
from npspec.shapes import disk, ellipse, rectangle_fixture, regular_ngon


def test_expansion_is_scale_invariant_in_shape():
    e = ellipse(2.0, 1.0)
    big = transform(e, 3.0, rotation=0.0)
    a, b = effective_expansion(e, 1), effective_expansion(big, 1)
    assert np.allclose(a.sigma(0.1), b.sigma(0.1 / 3))


def test_expansion_orders_from_tensor(library_map):
    m = library_map
    om = area(m)
    for s in (1, -1):
        ex = effective_expansion(m, s)
        M = pt_extreme(m, s).m
        # rho^2 term is the tensor of rho*Omega divided by rho^2, rho^4 term its square / 2
        assert np.allclose(ex.order2, M)
        assert np.allclose(ex.order4, M @ M / 2)
        assert np.trace(ex.order2) == pytest.approx(s * 4 * np.pi * m.gamma**2)
        assert om > 0


def test_sigma_vectorized():
    ex = effective_expansion(ellipse(2, 1), -1)
    rho = np.array([0.05, 0.1, 0.2])
    s = ex.sigma(rho)
    assert s.shape == (3, 2, 2)
    assert np.allclose(s[1], ex.sigma(0.1))
    assert np.allclose(ex.sigma(0.1, order=2), np.eye(2) + 0.01 * ex.order2)
    with pytest.raises(ParameterError):
        ex.sigma(0.1, order=3)
    with pytest.raises(ParameterError):
        ex.sigma()


def test_dilute_regime():
    with pytest.raises(DiluteRegimeError):
        effective_expansion(disk(), 1, rho=1.0)
    with pytest.raises(DiluteRegimeError):
        ngon_effective(4, 1, rho=1.0)


def test_disk_against_maxwell_garnett():
    # dilute Maxwell-Garnett 1 + 2f + 2f^2 for k = inf, f = pi rho^2
    ex = effective_expansion(disk(), 1)
    rho = 0.05
    f = np.pi * rho**2
    assert ex.sigma(rho)[0, 0] == pytest.approx(1 + 2 * f + 2 * f**2, abs=1e-14)
    assert maxwell_garnett(f, np.inf) == pytest.approx(1 + 2 * f + 2 * f**2, abs=1e-5)
    assert maxwell_garnett(0.1, 3.0) == pytest.approx(1.05 / 0.95)


@pytest.mark.parametrize("sign", [1, -1])
def test_a_functionals_against_matrix(library_map, sign):
    m = library_map
    for rho in (0.1, 0.3):
        if rho**2 * area(m) >= 1:
            continue
        A = effective_expansion(m, sign).A(rho)
        f = a_functionals(m, sign, rho)
        assert f.trace == pytest.approx(np.trace(A), rel=1e-12)
        assert f.det == pytest.approx(np.linalg.det(A), rel=1e-10)
        assert f.trace_inverse == pytest.approx(np.trace(np.linalg.inv(A)), rel=1e-10)


def test_a_functionals_singular():
    with pytest.raises(SingularTensorError):
        a_functionals(LaurentMap(gamma=1.0, a=[1.0]), 1, 0.1)


def test_inverse_trace_bound(library_map):
    for rho in (0.05, 0.2):
        if rho**2 * area(library_map) >= 1:
            continue
        assert a_functionals(library_map, 1, rho).trace_inverse <= a_inverse_trace_bound(library_map, rho) + 1e-12


def test_ngon_radius_against_mpmath():
    for n in (3, 4, 5, 8, 17):
        ref = mpmath.gamma(mpmath.mpf(1) / n) ** 2 / mpmath.gamma(mpmath.mpf(2) / n) * mpmath.sqrt(
            4 * mpmath.tan(mpmath.pi / n) / n
        ) / (4 * mpmath.pi)
        assert ngon_radius(n) == pytest.approx(float(ref), rel=1e-13)


def test_ngon_radius_monotone_with_limit():
    n = np.linspace(3, 200, 400)
    g = np.array([ngon_radius(x) for x in n])
    assert np.all(np.diff(g) < 0)
    assert abs(ngon_radius(200) - 1 / np.sqrt(np.pi)) <= 1e-3
    with pytest.raises(ParameterError):
        ngon_radius(2)


def test_ngon_radius_matches_map_area():
    for n in (3, 4, 6):
        assert area(regular_ngon(n, order=40 * n)) == pytest.approx(1.0, abs=2e-3)


@pytest.mark.parametrize("n", [3, 4, 6, 10])
def test_ngon_closed_form_matches_map(n):
    c2, c4 = ngon_coefficients(n)
    m = regular_ngon(n)
    for s in (1, -1):
        ex = effective_expansion(m, s)
        # gamma of the truncated map is exact, so the rho^2 terms agree exactly
        assert np.allclose(ex.order2, s * c2 * np.eye(2), rtol=1e-12, atol=1e-14)
        assert c2 == pytest.approx(2 * np.pi * ngon_radius(n) ** 2, rel=1e-12)
        assert c4 == pytest.approx(c2**2 / 2, rel=1e-12)
        ng = ngon_effective(n, s)
        assert np.allclose(ng.order2, s * c2 * np.eye(2)) and np.allclose(ng.order4, c4 * np.eye(2))


def test_square_coefficient_closed_form():
    c2, _ = ngon_coefficients(4)
    assert c2 == pytest.approx(float(mpmath.gamma(0.25) ** 4 / (8 * mpmath.pi**2)), rel=1e-13)


def test_rectangle_fixture_values():
    ex = effective_expansion(rectangle_fixture(), 1)
    assert np.allclose(np.diag(ex.order2), [4.0438, 1.4754], atol=5e-4)
    assert np.allclose(np.diag(ex.order4), [8.1763, 1.0885], atol=5e-4)


def test_ngon_effective_monotone_in_n_at_fixed_rho():
    # conductivity tends to the disk value: decreasing for k = inf, increasing for k = 0
    ns = range(3, 41)
    plus = np.array([ngon_effective(n, 1).sigma(0.1)[0, 0] for n in ns])
    minus = np.array([ngon_effective(n, -1).sigma(0.1)[0, 0] for n in ns])
    assert np.all(np.diff(plus) < 0) and np.all(np.diff(minus) > 0)
    d = effective_expansion(disk(1 / np.sqrt(np.pi)), 1).sigma(0.1)[0, 0]
    assert plus[-1] > d
