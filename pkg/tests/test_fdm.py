import numpy as np
import pytest

from npspec.effective import effective_expansion, maxwell_garnett
from npspec.exceptions import GeometryError, ParameterError, SolverError
from npspec.fdm import K_INF_PROXY, K_ZERO_PROXY, contrast_proxy, effective_fdm, rasterize, solve_cell
from npspec.shapes import disk, rectangle_fixture, rectangle_polygon, regular_ngon_polygon


def test_contrast_proxy():
    assert contrast_proxy(0) == K_ZERO_PROXY
    assert contrast_proxy(np.inf) == K_INF_PROXY
    assert contrast_proxy(2.5) == 2.5
    with pytest.raises(ParameterError):
        contrast_proxy(-1)


def test_disk_mask_fraction():
    p = rasterize(disk(), 0.25, 512)
    assert p.volume_fraction == pytest.approx(np.pi * 0.0625, rel=0.01)


def test_square_mask_fraction():
    p = rasterize(regular_ngon_polygon(4, 1.0, np.pi / 4), 0.3, 512)
    assert p.volume_fraction == pytest.approx(0.09, rel=0.01)


def test_mask_fraction_converges():
    errs = [abs(rasterize(disk(), 0.3, n).volume_fraction - np.pi * 0.09) for n in (32, 128, 512)]
    assert errs[2] < errs[0]


def test_geometry_error():
    with pytest.raises(GeometryError):
        rasterize(disk(), 0.5, 64)
    with pytest.raises(ParameterError):
        rasterize(disk(), -0.1, 64)
    with pytest.raises(ParameterError):
        rasterize(disk(), 0.1, 2)


def test_homogeneous_cell():
    p = rasterize(disk(), 0.2, 32, k=1.0)
    u = solve_cell(p, 1)
    y = p.centers
    assert np.allclose(u, np.broadcast_to(y[:, None], u.shape), atol=1e-12)
    assert np.allclose(effective_fdm(p).sigma_star, np.eye(2), atol=1e-12)


def test_corrector_mean_zero_and_direction():
    p = rasterize(disk(), 0.3, 64, k=4.0)
    with pytest.raises(ParameterError):
        solve_cell(p, 3)
    u2 = solve_cell(p, 2)
    v = u2 - p.centers[None, :]
    assert abs(v.mean()) < 1e-12


def test_disk_against_maxwell_garnett():
    res = effective_fdm(rasterize(disk(), 0.1, 256, k=2.0))
    mg = maxwell_garnett(np.pi * 0.01, 2.0)
    assert np.allclose(np.diag(res.sigma_star), mg, rtol=0.02)
    assert res.residual <= 1e-8
    assert np.all(np.linalg.eigvalsh(res.sigma_star) > 0)


def test_square_symmetry():
    s = effective_fdm(rasterize(regular_ngon_polygon(4, 1.0, np.pi / 4), 0.3, 128, k=0)).sigma_star
    assert s[0, 0] == pytest.approx(s[1, 1], rel=1e-9)
    assert abs(s[0, 1]) < 1e-9


def test_grid_convergence_on_disk():
    vals = [effective_fdm(rasterize(disk(), 0.3, n, k=5.0)).sigma_star[0, 0] for n in (64, 128, 256)]
    assert abs(vals[2] - vals[1]) < abs(vals[1] - vals[0])


def test_contrast_monotonicity():
    s = [effective_fdm(rasterize(disk(), 0.3, 64, k=k)).sigma_star[0, 0] for k in (0, 0.5, 2.0, 10.0, np.inf)]
    assert np.all(np.diff(s) > 0)


def test_rectangle_against_expansion():
    res = effective_fdm(rasterize(rectangle_polygon(), 0.1, 512, k=0))
    ref = effective_expansion(rectangle_fixture(), -1).sigma(0.1, order=2)
    assert res.sigma_star[0, 0] == pytest.approx(ref[0, 0], rel=0.03)
    assert res.sigma_star[0, 0] == pytest.approx(1 - 0.01 * 1.4754, rel=0.03)


def test_map_input_for_ellipse():
    from npspec.shapes import ellipse

    e = ellipse(1.2, 0.8)
    res = effective_fdm(rasterize(e, 0.15, 256, k=np.inf)).sigma_star
    asym = effective_expansion(e, 1).sigma(0.15)
    assert np.allclose(np.diag(res), np.diag(asym), rtol=0.03)


def test_solver_error_reports_residual():
    with pytest.raises(SolverError) as info:
        solve_cell(rasterize(disk(), 0.3, 64, k=1e-8), 1, maxiter=1)
    assert info.value.residual > 0
