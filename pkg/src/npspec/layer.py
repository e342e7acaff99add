"""Single-layer potentials of the boundary basis densities and the transmission problem."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .exceptions import CollarError, ParameterError
from .faber import grunsky_coefficients, mu_from_map
from .geometry import distance_to_polyline, winding_number
from .laurent import LaurentMap, _psi, _w_dpsi, boundary_sample
from .polarization import MaterialParam, solve_section

COLLAR_RTOL = 1e-6
CLASSIFY_SAMPLES = 8192


@dataclass(frozen=True)
class HarmonicPolynomial:
    """``H = Re P(z)`` (or ``Im P(z)``) for the complex polynomial with ascending ``coeffs``."""

    coeffs: tuple
    part: str = "real"

    def __post_init__(self):
        if self.part not in ("real", "imag"):
            raise ParameterError("part must be 'real' or 'imag'")
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return max(len(self.coeffs) - 1, 0)

    def _take(self, v):
        return v.real if self.part == "real" else v.imag

    def __call__(self, z):
        return self._take(P.polyval(np.asarray(z, dtype=complex), self.coeffs))

    def derivative(self, z):
        """Complex derivative ``P'(z)``."""
        return P.polyval(np.asarray(z, dtype=complex), P.polyder(self.coeffs) if len(self.coeffs) > 1 else [0])

    def gradient(self, z) -> np.ndarray:
        """``(dH/dx, dH/dy)`` stacked on the last axis."""
        d = self.derivative(z)
        if self.part == "real":
            return np.stack([d.real, -d.imag], axis=-1)
        return np.stack([d.imag, d.real], axis=-1)

    @classmethod
    def linear(cls, direction: int) -> "HarmonicPolynomial":
        """``H = x_1`` (direction 1) or ``H = x_2`` (direction 2)."""
        if direction == 1:
            return cls((0, 1), "real")
        if direction == 2:
            return cls((0, 1), "imag")
        raise ParameterError("direction must be 1 or 2")


@dataclass
class FieldGrid:
    """Evaluation points with inside/outside labels; ``valid`` excludes the boundary collar."""

    points: np.ndarray
    inside: np.ndarray
    valid: np.ndarray
    values: np.ndarray | None = None


def _classify(m: LaurentMap, z: np.ndarray):
    bs = boundary_sample(m, max(CLASSIFY_SAMPLES, 4 * (m.N + 1)))
    inside = winding_number(z, bs.points) != 0
    dist = distance_to_polyline(z, bs.points)
    return inside, dist


def make_grid(m: LaurentMap, xs, ys, collar: float = COLLAR_RTOL) -> FieldGrid:
    X, Y = np.meshgrid(np.asarray(xs, float), np.asarray(ys, float), indexing="ij")
    z = X + 1j * Y
    inside, dist = _classify(m, z.ravel())
    valid = dist > collar * m.gamma
    return FieldGrid(points=z, inside=inside.reshape(z.shape), valid=valid.reshape(z.shape))


def inverse_map(m: LaurentMap, z, tol: float = 1e-12, maxiter: int = 200, damping: float = 1.0) -> np.ndarray:
    """Solve ``Psi(w) = z`` for exterior points.

    Damped fixed-point iteration ``w <- z - a0 - sum a_n w^{-n}`` seeded with
    ``w = z``; points that have not converged are finished with Newton steps.
    """
    z = np.asarray(z, dtype=complex)
    w = z.copy()
    scale = np.maximum(np.abs(z), m.gamma)
    done = np.zeros(z.shape, dtype=bool)
    for _ in range(maxiter):
        new = z - (_psi(m, w) - w)
        step = new - w
        w = w + damping * step
        done = np.abs(step) <= tol * scale
        if done.all():
            break
    if not done.all():
        for _ in range(50):
            f = _psi(m, w) - z
            dpsi = _w_dpsi(m, w) / w
            w = w - f / dpsi
            if np.all(np.abs(f) <= tol * scale):
                break
    return w


def _normalized_faber_values(m: LaurentMap, n: int, z) -> np.ndarray:
    """``F_j(z) / gamma^j`` for ``j = 1..n`` by the three-term-style value recurrence."""
    g = m.gamma
    zeta = (np.asarray(z, dtype=complex) - m.a0) / g
    k = np.arange(1, m.N + 1)
    a = m.a / g ** (k + 1)
    vals = [np.ones_like(zeta)]
    for j in range(n):
        nxt = zeta * vals[j]
        for kk in range(1, min(j, m.N) + 1):
            if a[kk - 1] != 0:
                nxt = nxt - a[kk - 1] * vals[j - kk]
        if 1 <= j <= m.N:
            nxt = nxt - j * a[j - 1]
        vals.append(nxt)
    return np.array(vals[1:])


def _single_layer_all(m: LaurentMap, n: int, z, inside, w=None) -> np.ndarray:
    """``S[zeta_j](z)`` for ``j = 1..n``; shape ``(n,) + z.shape``."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros((n,) + z.shape, dtype=complex)
    j = np.arange(1, n + 1)
    pref = (-1 / (2 * np.sqrt(j)))[:, None]
    zin = z[inside]
    if zin.size:
        out[:, inside] = pref * _normalized_faber_values(m, n, zin)
    outside = ~inside
    if outside.any():
        wout = inverse_map(m, z[outside]) if w is None else np.asarray(w, dtype=complex)[outside]
        K = max(n * max(m.N, 1), 1)
        cn = grunsky_coefficients(m, n, K).c_norm  # F_j(Psi(w)) is a finite Laurent series
        u = m.gamma / wout
        powers = u[None, :] ** np.arange(1, K + 1)[:, None]
        series = cn @ powers
        mirror = (m.gamma / np.conj(wout))[None, :] ** j[:, None]
        out[:, outside] = pref * (series + mirror)
    return out


def single_layer_zeta(m: LaurentMap, k: int, z, where: str | None = None, collar: float = COLLAR_RTOL):
    """Single-layer potential of the basis density ``zeta_k`` at the points ``z``.

    ``where`` may be ``"inside"`` or ``"outside"`` to skip classification.
    Points within ``collar * gamma`` of the boundary raise :class:`CollarError`.
    """
    z = np.asarray(z, dtype=complex)
    flat = z.reshape(-1)
    inside, dist = _classify(m, flat)
    if np.any(dist <= collar * m.gamma):
        raise CollarError("evaluation point lies in the boundary collar")
    if where == "inside":
        inside = np.ones(flat.shape, dtype=bool)
    elif where == "outside":
        inside = np.zeros(flat.shape, dtype=bool)
    elif where is not None:
        raise ParameterError("where must be 'inside', 'outside' or None")
    if k == 0:
        vals = np.where(inside, np.log(m.gamma), 0.0).astype(complex)
        if (~inside).any():
            vals[~inside] = np.log(np.abs(inverse_map(m, flat[~inside])))
    else:
        vals = _single_layer_all(m, abs(k), flat, inside)[-1]
        if k < 0:
            vals = np.conj(vals)
    vals = vals.reshape(z.shape)
    return complex(vals) if vals.ndim == 0 else vals


def single_layer_exterior(m: LaurentMap, k: int, w) -> np.ndarray:
    """``S[zeta_k]`` at ``Psi(w)`` for ``|w| >= gamma``, evaluated directly in ``w``.

    At ``|w| = gamma`` this is the exterior boundary limit.
    """
    w = np.asarray(w, dtype=complex)
    flat = w.reshape(-1)
    vals = _single_layer_all(m, abs(k), _psi(m, flat), np.zeros(flat.shape, bool), w=flat)[-1]
    if k < 0:
        vals = np.conj(vals)
    return vals.reshape(w.shape)


def single_layer_polar(m: LaurentMap, k: int, rho, theta) -> np.ndarray:
    """``S[zeta_k]`` at ``Psi(e^{rho + i theta})`` for ``rho > ln gamma``."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= np.log(m.gamma)):
        raise ParameterError("exterior coordinates need rho > ln gamma")
    if k == 0:
        return np.broadcast_to(rho, np.broadcast(rho, np.asarray(theta)).shape).astype(complex)
    return single_layer_exterior(m, k, np.exp(rho + 1j * np.asarray(theta, dtype=float)))


def single_layer_interior_limit(m: LaurentMap, k: int, thetas) -> np.ndarray:
    """Interior boundary limit ``-F_k(Psi(gamma e^{i theta})) / (2 sqrt(k) gamma^k)``."""
    z = _psi(m, m.gamma * np.exp(1j * np.asarray(thetas, dtype=float)))
    vals = -_normalized_faber_values(m, abs(k), z)[-1] / (2 * np.sqrt(abs(k)))
    return np.conj(vals) if k < 0 else vals


def neumann_data_coeffs(m: LaurentMap, H: HarmonicPolynomial, n: int, Q: int | None = None):
    """Coefficients of ``dH/dnu`` in ``zeta_{-n..-1}`` and ``zeta_{1..n}``.

    The Fourier coefficients of ``(dH/dnu) h = Part(P'(Psi(w)) w Psi'(w))`` at
    ``w = gamma e^{i theta}`` give the coefficients after division by ``sqrt|j|``.
    """
    deg = max(H.degree, 1)
    Q = Q or int(2 ** np.ceil(np.log2(max(8 * n, 4 * deg * (m.N + 1) + 8, 64))))
    thetas = 2 * np.pi * np.arange(Q) / Q
    w = m.gamma * np.exp(1j * thetas)
    f = H._take(H.derivative(_psi(m, w)) * _w_dpsi(m, w))
    fh = np.fft.fft(f) / Q
    if abs(fh[0]) > 1e-10 * max(np.abs(fh).max(), 1.0):
        raise ParameterError("normal derivative has a non-zero mean")
    j = np.arange(1, n + 1)
    pos = fh[j] / np.sqrt(j)
    neg = fh[-j] / np.sqrt(j)
    return neg, pos


def transmission_solve(m: LaurentMap, mat: MaterialParam | float, H: HarmonicPolynomial, n: int, grid: FieldGrid) -> FieldGrid:
    """``u = H + S[phi]`` with ``(lambda I - K*) phi = dH/dnu`` on a finite section."""
    if not isinstance(mat, MaterialParam):
        mat = MaterialParam(mat)
    if H.degree > max(n // 2, 1):
        raise ParameterError("section order too small for the polynomial degree")
    neg, pos = neumann_data_coeffs(m, H, n)
    mu = mu_from_map(m, n).mu
    phi_neg, phi_pos = solve_section(m, mat.lam, neg, pos, n, mu=mu)
    phi_neg, phi_pos = phi_neg[0], phi_pos[0]
    z = grid.points.reshape(-1)
    valid = grid.valid.reshape(-1)
    inside = grid.inside.reshape(-1)
    values = np.full(z.shape, np.nan)
    zv = z[valid]
    S = _single_layer_all(m, n, zv, inside[valid])
    pert = phi_pos @ S + phi_neg @ np.conj(S)
    values[valid] = H(zv) + pert.real
    return FieldGrid(points=grid.points, inside=grid.inside, valid=grid.valid, values=values.reshape(grid.points.shape))
