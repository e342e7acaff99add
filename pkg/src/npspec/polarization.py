"""Polarization tensors, their bounds, and the interior/exterior map translation."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError, ResonanceError, SingularTensorError
from .faber import mu_from_map
from .laurent import LaurentMap, area, boundary_sample, diameter, with_gamma
from .spectrum import assemble_section

SECTION_COND_LIMIT = 1e12


@dataclass(frozen=True)
class MaterialParam:
    """Conductivity contrast ``k`` of the inclusion and ``lambda = (k+1)/(2(k-1))``."""

    k: float

    def __post_init__(self):
        k = float(self.k)
        if math.isnan(k) or k < 0:
            raise ParameterError(f"conductivity must lie in [0, inf], got {self.k}")
        if k == 1:
            raise ParameterError("k = 1 gives no contrast; lambda is undefined")
        object.__setattr__(self, "k", k)

    @property
    def lam(self) -> float:
        if math.isinf(self.k):
            return 0.5
        return (self.k + 1) / (2 * (self.k - 1))

    @property
    def sign(self) -> int:
        return 1 if self.k > 1 else -1

    @classmethod
    def from_lambda(cls, lam: float) -> "MaterialParam":
        if abs(lam) < 0.5:
            raise ParameterError("|lambda| must be at least 1/2")
        if lam == 0.5:
            return cls(math.inf)
        # k = (2 lam + 1) / (2 lam - 1)
        return cls((2 * lam + 1) / (2 * lam - 1))


@dataclass(frozen=True)
class PolarizationTensor:
    m: np.ndarray
    lam: float

    @property
    def trace(self) -> float:
        return float(np.trace(self.m))

    @property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in descending order."""
        return np.linalg.eigvalsh(self.m)[::-1]

    @property
    def trace_inverse(self) -> float:
        det = np.linalg.det(self.m)
        if det == 0:
            raise SingularTensorError("polarization tensor is singular")
        return float(np.trace(self.m) / det)


def _sign(sign) -> int:
    if sign in (1, "+", 1.0):
        return 1
    if sign in (-1, "-", -1.0):
        return -1
    raise ParameterError(f"sign must be +1 or -1, got {sign!r}")


def pt_extreme(m: LaurentMap, sign=1) -> PolarizationTensor:
    """Closed-form tensor for a perfectly conducting (+1) or insulating (-1) inclusion."""
    s = _sign(sign)
    g2 = m.gamma**2
    a1 = m.a1
    mat = 2 * np.pi * np.array([[s * g2 + a1.real, a1.imag], [a1.imag, s * g2 - a1.real]])
    return PolarizationTensor(m=mat, lam=0.5 * s)


def pt_trace_inverse(m: LaurentMap, sign=1) -> float:
    s = _sign(sign)
    g2 = m.gamma**2
    den = g2**2 - abs(m.a1) ** 2
    if den <= 0:
        raise SingularTensorError("|a_1| = gamma**2 makes the tensor singular")
    return s * g2 / (np.pi * den)


def _normal_density_coeffs(m: LaurentMap, n: int):
    """Coefficients of ``nu_1`` and ``nu_2`` in the basis ``zeta_{+-1..n}``.

    ``nu * h = w Psi'(w)`` on ``|w| = gamma`` is a trigonometric polynomial with
    coefficient ``gamma`` at order 1 and ``-j a_j gamma**-j`` at order ``-j``.
    Returns arrays ``(neg, pos)`` of shape ``(2, n)`` holding the
    coefficients of ``zeta_{-j}`` and ``zeta_j`` for ``j = 1..n``.
    """
    g = m.gamma
    # Fourier coefficients of nu*h, index j -> order j and order -j
    plus = np.zeros(n + 1, dtype=complex)
    minus = np.zeros(n + 1, dtype=complex)
    plus[1] = g
    for j in range(1, min(m.N, n) + 1):
        minus[j] = -j * m.coefficient(j) * g ** (-j)
    # conj(nu*h): order j <- conj(order -j)
    cplus = minus.conj()
    cminus = plus.conj()
    # nu_1 h = (nu h + conj(nu h)) / 2, nu_2 h = (nu h - conj(nu h)) / (2i)
    f_pos = np.array([(plus + cplus) / 2, (plus - cplus) / 2j])
    f_neg = np.array([(minus + cminus) / 2, (minus - cminus) / 2j])
    scale = np.sqrt(np.arange(1, n + 1))
    return f_neg[:, 1:] / scale, f_pos[:, 1:] / scale


def _density_times_h(neg, pos, thetas):
    """Samples of ``phi * h`` for ``phi = sum c_j zeta_j``; ``zeta_j h = sqrt|j| e^{ij theta}``."""
    n = pos.shape[-1]
    j = np.arange(1, n + 1)
    e = np.exp(1j * np.outer(thetas, j))
    sq = np.sqrt(j)
    return (e * sq) @ pos.T + (e.conj() * sq) @ neg.T


def solve_section(m: LaurentMap, lam: float, rhs_neg, rhs_pos, n: int, mu=None):
    """Solve ``(lam I - [K*]_n) phi = rhs`` for one or more right-hand sides."""
    mu = mu_from_map(m, n).mu if mu is None else mu
    sec = assemble_section(mu, n).matrix
    A = lam * np.eye(2 * n) - sec
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > SECTION_COND_LIMIT:
        raise ResonanceError(f"section system is singular at lambda={lam} (cond {cond:.2e})")
    # basis order zeta_{-n}..zeta_{-1}, zeta_1..zeta_n
    rhs = np.concatenate([np.atleast_2d(rhs_neg)[:, ::-1], np.atleast_2d(rhs_pos)], axis=1).T
    sol = np.linalg.solve(A, rhs).T
    return sol[:, :n][:, ::-1], sol[:, n:]


def pt_general(m: LaurentMap, mat: MaterialParam | float, n: int | None = None, Q: int | None = None) -> PolarizationTensor:
    """Polarization tensor for an arbitrary contrast from a finite section of order ``n``."""
    if not isinstance(mat, MaterialParam):
        mat = MaterialParam(mat)
    lam = mat.lam
    n = max(2 * m.N, 32) if n is None else int(n)
    if n < 2 * m.N:
        raise ParameterError(f"section order n={n} must be at least 2N={2 * m.N}")
    Q = 8 * n if Q is None else int(Q)
    if Q < 8 * n:
        raise ParameterError("need Q >= 8n")
    neg, pos = _normal_density_coeffs(m, n)
    phi_neg, phi_pos = solve_section(m, lam, neg, pos, n)
    bs = boundary_sample(m, Q)
    phih = _density_times_h(phi_neg, phi_pos, bs.thetas)  # (Q, 2)
    y = np.column_stack([bs.points.real, bs.points.imag])
    dtheta = 2 * np.pi / Q
    # M_ij = int y_j phi_i h dtheta; phi_i is real up to round-off
    M = (phih.real.T @ y) * dtheta
    M = (M + M.T) / 2
    return PolarizationTensor(m=M, lam=lam)


def hs_check(pt: PolarizationTensor | np.ndarray, k: float, area_: float) -> dict:
    """Signed slacks of the Hashin-Shtrikman trace bounds (non-negative = satisfied)."""
    M = pt.m if isinstance(pt, PolarizationTensor) else np.asarray(pt, dtype=float)
    k = float(k)
    if k == 1:
        raise ParameterError("k = 1 gives no contrast")
    tr = float(np.trace(M))
    det = float(np.linalg.det(M))
    if det == 0:
        raise SingularTensorError("tensor is singular")
    tr_inv = tr / det
    report = {"trace": tr, "trace_inverse": tr_inv, "area": area_, "k": k}
    if k == 0 or math.isinf(k):
        report["upper_slack"] = None
        report["lower_slack"] = 1.0 / area_ - abs(tr_inv)
    else:
        report["upper_slack"] = (1 + 1 / k) * area_ - tr / (k - 1)
        report["lower_slack"] = (1 + k) / area_ - (k - 1) * tr_inv
    report["satisfied"] = all(v is None or v >= -1e-12 * max(1.0, abs(tr)) for v in (report["upper_slack"], report["lower_slack"]))
    return report


def trace_diam_check(m: LaurentMap, Q: int = 2048) -> dict:
    """``pi/4 diam^2 <= |tr M| <= 4 pi diam^2`` with ``|tr M| = 4 pi gamma^2``."""
    d = diameter(m, Q)
    tr = 4 * np.pi * m.gamma**2
    return {
        "trace": tr,
        "diameter": d,
        "lower": np.pi / 4 * d**2,
        "upper": 4 * np.pi * d**2,
        "lower_slack": tr - np.pi / 4 * d**2,
        "upper_slack": 4 * np.pi * d**2 - tr,
        "gamma_lower_slack": m.gamma - d / 4,
        "gamma_upper_slack": d - m.gamma,
    }


def dilation_family(m: LaurentMap, r: float, sign=1) -> tuple[PolarizationTensor, dict]:
    """Tensor of the domain bounded by ``Psi(|w| = r)``, ``r >= gamma``."""
    if r < m.gamma:
        raise ParameterError("r must be at least gamma")
    mr = with_gamma(m, r)
    pt = pt_extreme(mr, sign)
    tau = pt.eigenvalues
    a = area(mr)
    summary = {
        "r": r,
        "area": a,
        "area_times_trace_inverse": a * abs(pt_trace_inverse(mr, sign)),
        "tau_gap": abs(tau[0] - tau[1]),
    }
    return pt, summary


# --- interior Riemann map coefficients ----------------------------------------

@dataclass(frozen=True)
class RiemannCoefficients:
    """Taylor coefficients ``b_1, b_2, ...`` of ``Phi(z) = b_1 z + b_2 z^2 + ...``."""

    b: np.ndarray

    def __post_init__(self):
        b = np.array(self.b, dtype=complex).reshape(-1)
        if b.size == 0 or b[0].imag != 0 or b[0].real <= 0:
            raise ParameterError("b_1 must be real and positive")
        b.setflags(write=False)
        object.__setattr__(self, "b", b)

    @property
    def b1(self) -> float:
        return float(self.b[0].real)

    def coefficient(self, n: int) -> complex:
        return complex(self.b[n - 1]) if 1 <= n <= self.b.size else 0j


def series_reciprocal(c, order: int) -> np.ndarray:
    """First ``order`` Taylor coefficients of ``1 / sum c_k t^k`` (``c_0 != 0``)."""
    c = np.asarray(c, dtype=complex)
    if c.size == 0 or c[0] == 0:
        raise ParameterError("series has zero constant term; reciprocal undefined")
    r = np.zeros(order, dtype=complex)
    r[0] = 1 / c[0]
    for k in range(1, order):
        top = min(k, c.size - 1)
        r[k] = -np.dot(c[1 : top + 1], r[k - 1 :: -1][:top]) / c[0]
    return r


def riemann_to_exterior(b: RiemannCoefficients, order: int) -> LaurentMap:
    """Exterior map ``1 / Phi(1 / (b_1 z))`` of the reflected domain, up to ``a_order``."""
    b1 = b.b1
    # Phi(t) = b1 t (1 + (b2/b1) t + (b3/b1) t^2 + ...)
    r = series_reciprocal(np.asarray(b.b) / b1, order + 2)
    n = np.arange(order + 2)
    coeffs = r / b1**n  # coefficient of z^{1-n}
    return LaurentMap(gamma=1 / b1, a0=coeffs[1], a=coeffs[2:])


def exterior_to_riemann(m: LaurentMap, order: int) -> RiemannCoefficients:
    """Interior map of the reflected domain ``{1/z : z outside the inclusion}``.

    Inverse of :func:`riemann_to_exterior`; needs the origin inside the inclusion.
    """
    g = m.gamma
    # Psi(g/t) = (g/t) (1 + a0 t/g + a1 t^2/g^2 + ...)
    n = np.arange(m.N + 2)
    c = np.concatenate(([1.0 + 0j, m.a0], m.a)) / g**n
    r = series_reciprocal(c, order)
    return RiemannCoefficients(b=r / g)


def translated_pt(b: RiemannCoefficients, sign=1) -> np.ndarray:
    """Extreme-contrast tensor of the reflected domain directly from ``b_1, b_2, b_3``."""
    s = _sign(sign)
    b1, b2, b3 = b.b1, b.coefficient(2), b.coefficient(3)
    q = (b2**2 / b1 - b3) / b1**3
    return 2 * np.pi * np.array([[s / b1**2 + q.real, q.imag], [q.imag, s / b1**2 - q.real]])


def _riemann_value(b: RiemannCoefficients, s: int) -> float:
    b1, b2, b3 = b.b1, b.coefficient(2), b.coefficient(3)
    return 1 / b1**2 + s * ((b2**2 / b1 - b3) / b1**3).real


def riemann_inequality_check(b: RiemannCoefficients, area_omega: float, c: RiemannCoefficients | None = None) -> dict:
    """Slacks of the coefficient inequalities; ``c`` (if given) must map a larger domain.

    The containment of the two interior domains is the caller's assertion.
    """
    report = {"containment": "caller-asserted" if c is not None else None}
    for s, tag in ((1, "plus"), (-1, "minus")):
        v = _riemann_value(b, s)
        report[f"value_{tag}"] = v
        report[f"area_slack_{tag}"] = v - area_omega / (2 * np.pi)
        if c is not None:
            report[f"monotonicity_slack_{tag}"] = v - _riemann_value(c, s)
    return report
