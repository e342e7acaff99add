"""Exterior maps for the inclusion families used in the experiments."""
from __future__ import annotations

import numpy as np
from scipy.special import binom

from .effective import ngon_radius
from .exceptions import InvalidMapError, ParameterError
from .laurent import LaurentMap, transform, validate

# conformal radius and a_1 of the sqrt(3) x 1/sqrt(3) rectangle (Schwarz-Christoffel fit)
RECTANGLE_GAMMA = 0.66273
RECTANGLE_A1 = 0.20439


def disk(radius: float = 1.0) -> LaurentMap:
    return LaurentMap(gamma=radius)


def ellipse(a: float, b: float) -> LaurentMap:
    """Ellipse with semi-axes ``a >= b > 0`` along the coordinate axes."""
    if not a >= b > 0:
        raise ParameterError("need a >= b > 0")
    return LaurentMap(gamma=(a + b) / 2, a=[(a * a - b * b) / 4])


def algebraic(m: int, coeff: float, convention: str = "coeff") -> LaurentMap:
    """``z + c z^{-m}`` with unit conformal radius.

    ``convention="s"`` reads ``coeff`` as ``s`` in ``z + (s/m) z^{-m}``.
    """
    if m < 1:
        raise ParameterError("m must be >= 1")
    if convention not in ("coeff", "s"):
        raise ParameterError("convention must be 'coeff' or 's'")
    c = coeff / m if convention == "s" else coeff
    if not abs(c) * m < 1:
        raise InvalidMapError(f"|coeff| * m = {abs(c) * m:g} must be < 1 for a Jordan curve")
    a = np.zeros(m, dtype=complex)
    a[m - 1] = c
    return validate(LaurentMap(gamma=1.0, a=a))


def regular_ngon(n: int, area: float = 1.0, orientation: float = 0.0, order: int | None = None) -> LaurentMap:
    """Truncated exterior map of the regular ``n``-gon with one vertex on the ray ``arg z = orientation``.

    Integrates ``Psi'(w) = (1 - (gamma/w)^n)^{2/n}`` term by term; coefficients
    survive only at indices ``j n - 1``.  ``order`` defaults to ``8 n``.
    """
    if n < 3:
        raise ParameterError("a regular polygon needs n >= 3")
    order = 8 * n if order is None else int(order)
    g = ngon_radius(n, area)
    a = np.zeros(order, dtype=complex)
    for j in range(1, (order + 1) // n + 1):
        idx = j * n - 1
        if idx > order:
            break
        # w^{-jn} integrates to w^{1-jn} / (1 - jn)
        a[idx - 1] = (-1) ** j * binom(2 / n, j) * g ** (j * n) / (1 - j * n)
    return transform(LaurentMap(gamma=g, a=a), rotation=orientation)


def rectangle_fixture() -> LaurentMap:
    """Two-term map carrying only ``(gamma, a_1)`` of the unit-area rectangle."""
    return LaurentMap(gamma=RECTANGLE_GAMMA, a=[RECTANGLE_A1])


def rectangle_polygon() -> np.ndarray:
    """Vertices of the width-sqrt(3), height-1/sqrt(3) rectangle, counter-clockwise."""
    hx, hy = np.sqrt(3) / 2, 1 / (2 * np.sqrt(3))
    return np.array([hx - 1j * hy, hx + 1j * hy, -hx + 1j * hy, -hx - 1j * hy])


def regular_ngon_polygon(n: int, area: float = 1.0, orientation: float = 0.0) -> np.ndarray:
    """Exact vertices of the regular ``n``-gon matching :func:`regular_ngon`."""
    if n < 3:
        raise ParameterError("a regular polygon needs n >= 3")
    R = np.sqrt(2 * area / (n * np.sin(2 * np.pi / n)))
    return R * np.exp(1j * (orientation + 2 * np.pi * np.arange(n) / n))


def parse_polygon(spec: str) -> np.ndarray | None:
    """Exact vertices for the polygonal generators (``ngon``, ``square``, ``rectangle``), else ``None``."""
    name, _, rest = spec.partition(":")
    args = [x for x in rest.split(",") if x] if rest else []
    name = name.lower()
    try:
        if name == "ngon":
            return regular_ngon_polygon(int(args[0]), float(args[1]) if len(args) > 1 else 1.0, float(args[2]) if len(args) > 2 else 0.0)
    except (IndexError, ValueError) as exc:
        raise ParameterError(f"bad shape spec {spec!r}: {exc}") from exc
    if name == "square":
        return regular_ngon_polygon(4, 1.0, np.pi / 4)
    if name == "rectangle":
        return rectangle_polygon()
    return None


_EXAMPLE_RANGES = {"FAMILY4": (1, 42), "FAMILY3": (1, 119), "FAMILY2": (1, 6)}


def named_example(name: str, j: int | None = None) -> LaurentMap:
    """Named test domains with unit conformal radius.

    ``SMOOTH6``: six-term smooth domain with slow finite-section convergence.
    ``FAMILY4`` (j = 1..42): ``j (z^-1/600 + z^-2/300 + z^-3/1200 + z^-4/320)``.
    ``FAMILY3`` (j = 1..119): ``j (z^-1/400 + z^-2/600 + z^-3/1200)``.
    ``FAMILY2`` (j = 1..6): ``(j^2/600) z^-1 + (j/300) z^-2``.
    """
    key = name.upper()
    if key == "SMOOTH6":
        return LaurentMap(gamma=1.0, a=[0.01, 0.07, 0.01, 0.03, 0.05, 0.07])
    if key not in _EXAMPLE_RANGES:
        raise ParameterError(f"unknown example {name!r}")
    lo, hi = _EXAMPLE_RANGES[key]
    if j is None or not lo <= j <= hi:
        raise ParameterError(f"{key} needs {lo} <= j <= {hi}")
    if key == "FAMILY4":
        a = [j / 600, j / 300, j / 1200, j / 320]
    elif key == "FAMILY3":
        a = [j / 400, j / 600, j / 1200]
    else:
        a = [j * j / 600, j / 300]
    return LaurentMap(gamma=1.0, a=a)


def fourier_example(m: int, s: float) -> LaurentMap:
    """``z + (s/m) z^{-m}`` with ``0 < s < 1``."""
    if not 0 < s < 1:
        raise InvalidMapError("s must lie in (0, 1)")
    return algebraic(m, s, convention="s")


def parse_shape(spec: str) -> LaurentMap:
    """Build a map from ``generator:args`` (e.g. ``ellipse:2,1``, ``ngon:4``).

    Generators: ``disk[:r]``, ``ellipse:a,b``, ``algebraic:m,c``,
    ``fourier:m,s``, ``ngon:n[,area[,angle]]``, ``square`` (axis-aligned
    unit-area 4-gon), ``rectangle``, ``example:NAME[,j]``.
    """
    name, _, rest = spec.partition(":")
    args = [x for x in rest.split(",") if x] if rest else []
    name = name.lower()
    try:
        if name == "disk":
            return disk(float(args[0]) if args else 1.0)
        if name == "ellipse":
            return ellipse(float(args[0]), float(args[1]))
        if name == "algebraic":
            return algebraic(int(args[0]), float(args[1]))
        if name == "fourier":
            return fourier_example(int(args[0]), float(args[1]))
        if name == "ngon":
            n = int(args[0])
            ar = float(args[1]) if len(args) > 1 else 1.0
            ang = float(args[2]) if len(args) > 2 else 0.0
            return regular_ngon(n, ar, ang)
        if name == "square":
            return regular_ngon(4, 1.0, np.pi / 4)
        if name == "rectangle":
            return rectangle_fixture()
        if name == "example":
            return named_example(args[0], int(args[1]) if len(args) > 1 else None)
    except (IndexError, ValueError) as exc:
        raise ParameterError(f"bad shape spec {spec!r}: {exc}") from exc
    raise ParameterError(f"unknown shape generator {name!r}")
