import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from npspec.geometry import winding_number
from npspec.exceptions import DegenerateBoundaryError, DomainError, InvalidMapError, ParameterError
from npspec.laurent import (
    LaurentMap,
    area,
    boundary_sample,
    capacity,
    diameter,
    dumps,
    eval_map,
    green_area,
    is_simple,
    load,
    loads,
    save,
    shoelace_area,
    transform,
    validate,
    with_gamma,
)


def test_eval_matches_series():
    m = LaurentMap(gamma=1.0, a0=0.5, a=[0.1, 0.2j])
    w = 1.7 * np.exp(0.3j)
    assert eval_map(m, w) == pytest.approx(w + 0.5 + 0.1 / w + 0.2j / w**2, abs=1e-15)
    assert m(w) == eval_map(m, w)


def test_eval_rejects_inside_points():
    with pytest.raises(DomainError):
        eval_map(LaurentMap(gamma=1.0), 0.5)


def test_invalid_radius():
    with pytest.raises(InvalidMapError):
        LaurentMap(gamma=0.0)


def test_coefficients_are_read_only():
    m = LaurentMap(gamma=1.0, a=[0.1])
    with pytest.raises(ValueError):
        m.a[0] = 1.0


def test_boundary_sample_needs_enough_points():
    with pytest.raises(ParameterError):
        boundary_sample(LaurentMap(gamma=1.0, a=np.full(10, 0.01)), 16)


def test_degenerate_boundary():
    # a_1 = gamma^2 squashes the ellipse to a segment: h vanishes at two angles
    with pytest.raises(DegenerateBoundaryError):
        boundary_sample(LaurentMap(gamma=1.0, a=[1.0]), 64)


def test_normals_point_outward(library_map):
    bs = boundary_sample(library_map, 512)
    poly = boundary_sample(library_map, 8192).points
    eps = 1e-3 * library_map.gamma
    assert np.all(winding_number(bs.points + eps * bs.normals, poly) == 0)
    assert np.all(winding_number(bs.points - eps * bs.normals, poly) == 1)
    assert np.allclose(np.abs(bs.normals), 1)


def test_area_against_green_and_shoelace(library_map):
    a = area(library_map)
    assert green_area(boundary_sample(library_map, 4096)) == pytest.approx(a, abs=1e-12)
    assert shoelace_area(boundary_sample(library_map, 1 << 16).points) == pytest.approx(a, rel=1e-8)


def test_area_of_ellipse():
    m = LaurentMap(gamma=1.5, a=[0.75])  # semi-axes 2 and 1
    assert area(m) == pytest.approx(2 * np.pi, abs=1e-14)


def test_nonpositive_area_is_invalid():
    with pytest.raises(InvalidMapError):
        area(LaurentMap(gamma=1.0, a=[0.0, 0.9]))


def test_bieberbach_and_capacity_bounds(library_map):
    assert abs(library_map.a1) <= library_map.gamma**2
    d = diameter(library_map)
    assert d / 4 <= capacity(library_map) <= d


def test_diameter_of_ellipse():
    assert diameter(LaurentMap(gamma=1.5, a=[0.75]), Q=4096) == pytest.approx(4.0, abs=1e-9)


def test_transform_scales_geometry():
    m = LaurentMap(gamma=1.0, a=[0.1, 0.05])
    t = transform(m, scale=2.0, rotation=0.4, shift=1 + 1j)
    assert t.gamma == pytest.approx(2.0)
    assert area(t) == pytest.approx(4 * area(m))
    w = 1.3 * np.exp(0.7j)
    # rotation acts on both the plane and the parameter
    assert t(2 * np.exp(0.4j) * w) == pytest.approx(2 * np.exp(0.4j) * m(w) + 1 + 1j)


def test_with_gamma_keeps_coefficients():
    m = LaurentMap(gamma=1.0, a=[0.2])
    r = with_gamma(m, 3.0)
    assert r.gamma == 3.0 and np.array_equal(r.a, m.a)


def test_simplicity_detects_loops():
    assert is_simple(LaurentMap(gamma=1.0, a=[0, 0, 0.2]))
    with pytest.raises(InvalidMapError):
        validate(LaurentMap(gamma=1.0, a=[0, 0, 0.5]))


def test_validate_bieberbach():
    with pytest.raises(InvalidMapError):
        validate(LaurentMap(gamma=1.0, a=[1.2]))


def test_json_round_trip(tmp_path):
    m = LaurentMap(gamma=0.7, a0=0.1 - 0.2j, a=[0.01, 0, 0.03j, 0])
    assert loads(dumps(m)) == m
    save(m, tmp_path / "s.json")
    assert load(tmp_path / "s.json") == m
    assert hash(load(tmp_path / "s.json")) == hash(m)


def test_malformed_json():
    with pytest.raises(InvalidMapError):
        loads('{"a": []}')


coeff = st.floats(-0.04, 0.04, allow_nan=False)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(coeff, coeff), min_size=1, max_size=6), st.floats(0.5, 2.0))
def test_area_property(pairs, gamma):
    a = [complex(x, y) * gamma ** (i + 2) for i, (x, y) in enumerate(pairs)]
    m = LaurentMap(gamma=gamma, a=a)
    assert area(m) <= np.pi * gamma**2
    assert green_area(boundary_sample(m, 256)) == pytest.approx(area(m), rel=1e-12)
