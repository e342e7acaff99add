"""Dilute-limit effective conductivity of periodic composites with extreme inclusions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gamma as gamma_fn

from .exceptions import DiluteRegimeError, ParameterError, SingularTensorError
from .laurent import LaurentMap, area, transform
from .polarization import _sign, pt_extreme


@dataclass(frozen=True)
class EffectiveExpansion:
    """``sigma* = I + rho^2 order2 + rho^4 order4 + O(rho^6)``."""

    order2: np.ndarray
    order4: np.ndarray
    sign: int
    rho: float | None = None

    @property
    def identity(self) -> np.ndarray:
        return np.eye(2)

    def sigma(self, rho=None, order: int = 4) -> np.ndarray:
        """Truncated expansion; vectorized over ``rho`` (shape ``(..., 2, 2)``)."""
        rho = self.rho if rho is None else rho
        if rho is None:
            raise ParameterError("no rho given")
        if order not in (2, 4):
            raise ParameterError("order must be 2 or 4")
        r2 = np.asarray(rho, dtype=float)[..., None, None] ** 2
        out = np.eye(2) + r2 * self.order2
        if order == 4:
            out = out + r2**2 * self.order4
        return out

    def A(self, rho=None) -> np.ndarray:
        return self.sigma(rho) - np.eye(2)


class AFunctionals(NamedTuple):
    trace: float
    det: float
    trace_inverse: float


def effective_expansion(m: LaurentMap, sign=1, rho: float | None = None) -> EffectiveExpansion:
    s = _sign(sign)
    omega = area(m)
    if rho is not None and rho**2 * omega >= 1:
        raise DiluteRegimeError(f"rho^2 |Omega| = {rho**2 * omega:.4g} must be < 1")
    # unit-area reference shape B, D = rho Omega = (rho |Omega|^{1/2}) B
    unit = transform(m, 1 / np.sqrt(omega))
    Mb = pt_extreme(unit, s).m
    order2 = omega * Mb
    order4 = omega**2 * (Mb @ Mb) / 2
    return EffectiveExpansion(order2=order2, order4=order4, sign=s, rho=rho)


def a_functionals(m: LaurentMap, sign, rho: float) -> AFunctionals:
    """Trace, determinant and inverse trace of ``A = sigma* - I`` in closed form."""
    s = _sign(sign)
    g2 = m.gamma**2
    a2 = abs(m.a1) ** 2
    D = g2**2 - a2
    if D <= 0:
        raise SingularTensorError("|a_1| = gamma**2 makes A singular")
    r2 = rho**2
    tr = s * 4 * np.pi * g2 * r2 + 4 * np.pi**2 * (g2**2 + a2) * r2**2
    det = 4 * np.pi**2 * r2**2 * D + s * 8 * np.pi**3 * g2 * r2**3 * D + 4 * np.pi**4 * r2**4 * D**2
    if det == 0:
        raise SingularTensorError("A is singular at this rho")
    X = np.pi * D / g2
    tr_inv = _trace_inverse(g2, X, r2, s)
    return AFunctionals(trace=tr, det=det, trace_inverse=tr_inv)


def _trace_inverse(g2, X, r2, s):
    num = s + 2 * np.pi * g2 * r2 - r2 * X
    den = r2 * X + s * 2 * np.pi * g2 * r2**2 * X + np.pi * r2**3 * g2 * X**2
    return num / den


def a_inverse_trace_bound(m: LaurentMap, rho: float) -> float:
    """Upper bound on ``tr(A^{-1})`` for ``k = inf``; ``X`` replaced by the area."""
    return _trace_inverse(m.gamma**2, area(m), rho**2, 1)


def ngon_radius(n: float, target_area: float = 1.0) -> float:
    """Conformal radius of the regular ``n``-gon of the given area.

    Accepts real ``n > 2`` so the radius can be studied as a function of ``n``.
    """
    if n <= 2:
        raise ParameterError("a regular polygon needs n >= 3")
    L = np.sqrt(4 * np.tan(np.pi / n) / n)
    g = gamma_fn(1 / n) ** 2 / gamma_fn(2 / n) * L / (4 * np.pi)
    return float(g * np.sqrt(target_area))


def ngon_coefficients(n: float) -> tuple[float, float]:
    """``rho^2`` and ``rho^4`` magnitudes of the unit-area n-gon expansion."""
    if n < 3:
        raise ParameterError("a regular polygon needs n >= 3")
    g1, g2 = gamma_fn(1 / n), gamma_fn(2 / n)
    t = np.tan(np.pi / n)
    c2 = g1**4 / g2**2 * t / n / (2 * np.pi)
    c4 = g1**8 / g2**4 * t**2 / n**2 / (8 * np.pi**2)
    return float(c2), float(c4)


def ngon_effective(n: int, sign=1, rho: float | None = None) -> EffectiveExpansion:
    s = _sign(sign)
    c2, c4 = ngon_coefficients(n)
    if rho is not None and rho**2 >= 1:
        raise DiluteRegimeError("rho^2 |Omega| must be < 1")
    return EffectiveExpansion(order2=s * c2 * np.eye(2), order4=c4 * np.eye(2), sign=s, rho=rho)


def maxwell_garnett(volume_fraction, k: float) -> np.ndarray:
    """Closed-form Maxwell-Garnett conductivity for circular inclusions."""
    if np.isinf(k):
        beta = 1.0
    else:
        beta = (k - 1) / (k + 1)
    f = np.asarray(volume_fraction, dtype=float)
    return (1 + beta * f) / (1 - beta * f)
