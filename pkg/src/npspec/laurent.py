"""Exterior conformal maps stored as truncated Laurent series.

A map is ``Psi(w) = w + a0 + sum_{n=1}^N a_n w^{-n}`` defined for ``|w| > gamma``.
The boundary of the inclusion is the image of the circle ``|w| = gamma``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull, QhullError, cKDTree
from shapely.geometry import LinearRing

from .exceptions import (
    DegenerateBoundaryError,
    DomainError,
    InvalidMapError,
    ParameterError,
)

SIMPLICITY_SAMPLES = 2048
SIMPLICITY_RTOL = 1e-9
DEGENERATE_RTOL = 1e-12


@dataclass(frozen=True)
class LaurentMap:
    """Truncated exterior conformal map ``w + a0 + sum a_n / w**n``."""

    gamma: float
    a0: complex = 0j
    a: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))

    def __post_init__(self):
        gamma = float(self.gamma)
        if not np.isfinite(gamma) or gamma <= 0:
            raise InvalidMapError(f"conformal radius must be positive, got {self.gamma}")
        a = np.array(self.a, dtype=complex).reshape(-1)
        a.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "a0", complex(self.a0))
        object.__setattr__(self, "a", a)

    @property
    def N(self) -> int:
        return int(self.a.size)

    @property
    def a1(self) -> complex:
        return complex(self.a[0]) if self.N else 0j

    def coefficient(self, n: int) -> complex:
        """Return ``a_n`` (``a_0`` for ``n == 0``, zero beyond the truncation)."""
        if n == 0:
            return self.a0
        if 1 <= n <= self.N:
            return complex(self.a[n - 1])
        return 0j

    def normalized(self) -> "LaurentMap":
        """The same shape scaled by ``1/gamma`` so that the conformal radius is 1."""
        return transform(self, 1.0 / self.gamma)

    def __eq__(self, other):
        if not isinstance(other, LaurentMap):
            return NotImplemented
        return (
            self.gamma == other.gamma
            and self.a0 == other.a0
            and self.a.shape == other.a.shape
            and bool(np.all(self.a == other.a))
        )

    def __hash__(self):
        return hash((self.gamma, self.a0, self.a.tobytes()))

    def __call__(self, w):
        return eval_map(self, w)


@dataclass(frozen=True)
class BoundarySample:
    thetas: np.ndarray
    points: np.ndarray
    h: np.ndarray
    normals: np.ndarray

    @property
    def Q(self) -> int:
        return int(self.thetas.size)


def _psi(m: LaurentMap, w):
    w = np.asarray(w, dtype=complex)
    u = 1.0 / w
    tail = np.polynomial.polynomial.polyval(u, np.concatenate(([0j], m.a))) if m.N else 0
    return w + m.a0 + tail


def _w_dpsi(m: LaurentMap, w):
    """``w * Psi'(w)``, exact from the coefficients."""
    w = np.asarray(w, dtype=complex)
    if not m.N:
        return w.copy()
    n = np.arange(1, m.N + 1)
    u = 1.0 / w
    return w - np.polynomial.polynomial.polyval(u, np.concatenate(([0j], n * m.a)))


def eval_map(m: LaurentMap, w):
    """Evaluate ``Psi(w)``; every ``w`` must satisfy ``|w| > gamma``."""
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(w) <= m.gamma):
        raise DomainError(f"|w| must exceed gamma={m.gamma}")
    out = _psi(m, w)
    return complex(out) if out.ndim == 0 else out


def boundary_sample(m: LaurentMap, Q: int) -> BoundarySample:
    """Sample the boundary curve at ``Q`` equispaced parameter angles."""
    Q = int(Q)
    if Q < 4 * (m.N + 1):
        raise ParameterError(f"Q={Q} too small for N={m.N}; need Q >= {4 * (m.N + 1)}")
    thetas = 2 * np.pi * np.arange(Q) / Q
    w = m.gamma * np.exp(1j * thetas)
    wd = _w_dpsi(m, w)
    h = np.abs(wd)
    if np.min(h) < DEGENERATE_RTOL * m.gamma:
        raise DegenerateBoundaryError(
            f"scale factor vanishes on the boundary (min h = {np.min(h):.3e})"
        )
    return BoundarySample(thetas=thetas, points=_psi(m, w), h=h, normals=wd / h)


def area(m: LaurentMap) -> float:
    """Enclosed area ``pi * (gamma**2 - sum n |a_n|**2 / gamma**(2n))``."""
    n = np.arange(1, m.N + 1)
    val = np.pi * (m.gamma**2 - np.sum(n * np.abs(m.a) ** 2 / m.gamma ** (2 * n)))
    if val <= 0:
        raise InvalidMapError(f"series area is non-positive ({val:.3e})")
    return float(val)


def shoelace_area(points) -> float:
    """Signed polygon area by Green's theorem; positive for counter-clockwise order."""
    z = np.asarray(points, dtype=complex)
    zn = np.roll(z, -1)
    return float(0.5 * np.sum(z.real * zn.imag - zn.real * z.imag))


def green_area(sample: BoundarySample) -> float:
    """Area as ``(1/2) * integral of (z . nu) dsigma`` by the trapezoid rule.

    Uses the exact tangent of the sample, so it is spectrally accurate for
    smooth boundaries (the polygonal shoelace formula is only second order).
    """
    integrand = (np.conj(sample.points) * sample.normals).real * sample.h
    return float(0.5 * integrand.sum() * 2 * np.pi / sample.Q)


def diameter(m: LaurentMap, Q: int = 2048) -> float:
    """Largest distance between two boundary samples."""
    if Q < 256:
        raise ParameterError("diameter needs Q >= 256")
    pts = boundary_sample(m, max(Q, 4 * (m.N + 1))).points
    xy = np.column_stack([pts.real, pts.imag])
    try:
        xy = xy[ConvexHull(xy).vertices]
    except QhullError:
        pass
    best = 0.0
    for start in range(0, len(xy), 512):
        block = xy[start : start + 512]
        d = np.hypot(block[:, None, 0] - xy[None, :, 0], block[:, None, 1] - xy[None, :, 1])
        best = max(best, float(d.max()))
    return best


def capacity(m: LaurentMap) -> float:
    """Logarithmic capacity of the closed inclusion, equal to ``gamma``."""
    return m.gamma


def transform(m: LaurentMap, scale: float = 1.0, rotation: float = 0.0, shift: complex = 0j) -> LaurentMap:
    """Map for the image of the inclusion under ``z -> scale*exp(i*rotation)*z + shift``."""
    if scale <= 0:
        raise ParameterError("scale must be positive")
    rot = np.exp(1j * rotation)
    n = np.arange(1, m.N + 1)
    return LaurentMap(
        gamma=scale * m.gamma,
        a0=scale * rot * m.a0 + shift,
        a=m.a * (scale * rot) ** (n + 1),
    )


def with_gamma(m: LaurentMap, r: float) -> LaurentMap:
    """Same coefficients, conformal radius replaced by ``r``."""
    return LaurentMap(gamma=r, a0=m.a0, a=m.a)


def is_simple(m: LaurentMap, Q: int = SIMPLICITY_SAMPLES, rtol: float = SIMPLICITY_RTOL) -> bool:
    """Heuristic Jordan-curve test on a dense polygonal sample of the boundary.

    Two checks: no pair of non-adjacent samples closer than ``rtol * diameter``,
    and the sampled polygon has no self-intersections.
    """
    Q = max(Q, 4 * (m.N + 1))
    pts = boundary_sample(m, Q).points
    xy = np.column_stack([pts.real, pts.imag])
    span = np.ptp(xy, axis=0).max()
    pairs = cKDTree(xy).query_pairs(rtol * span, output_type="ndarray")
    if len(pairs):
        gap = np.abs(pairs[:, 0] - pairs[:, 1])
        if np.any(np.minimum(gap, Q - gap) > 1):
            return False
    return bool(LinearRing(xy).is_simple)


def validate(m: LaurentMap) -> LaurentMap:
    """Raise :class:`InvalidMapError` unless ``m`` looks like a Jordan domain."""
    if abs(m.a1) > m.gamma**2 * (1 + 1e-14):
        raise InvalidMapError(f"|a_1| = {abs(m.a1):.6g} exceeds gamma**2 = {m.gamma**2:.6g}")
    area(m)
    try:
        simple = is_simple(m)
    except DegenerateBoundaryError as exc:
        raise InvalidMapError(str(exc)) from exc
    if not simple:
        raise InvalidMapError("boundary curve self-intersects")
    return m


# --- shape files -----------------------------------------------------------

def to_dict(m: LaurentMap) -> dict:
    return {
        "gamma": m.gamma,
        "a0": [m.a0.real, m.a0.imag],
        "a": [[c.real, c.imag] for c in m.a.tolist()],
    }


def from_dict(d: dict) -> LaurentMap:
    try:
        a0 = complex(*d.get("a0", [0.0, 0.0]))
        a = [complex(re, im) for re, im in d.get("a", [])]
        return LaurentMap(gamma=float(d["gamma"]), a0=a0, a=np.array(a, dtype=complex))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidMapError(f"malformed shape description: {exc}") from exc


def dumps(m: LaurentMap) -> str:
    return json.dumps(to_dict(m)) + "\n"


def loads(text: str) -> LaurentMap:
    return from_dict(json.loads(text))


def save(m: LaurentMap, path) -> None:
    Path(path).write_text(dumps(m))


def load(path) -> LaurentMap:
    return loads(Path(path).read_text())
