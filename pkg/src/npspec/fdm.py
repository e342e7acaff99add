"""Finite-volume solver for the periodic cell problem, used as an independent check."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pyamg
import scipy.sparse as sp

from .exceptions import GeometryError, ParameterError, SolverError
from .geometry import rasterize_polygon
from .laurent import LaurentMap, boundary_sample

K_ZERO_PROXY = 1e-8
K_INF_PROXY = 1e8
BOUNDARY_SAMPLES = 4096
SOLVER_TOL = 1e-10


def contrast_proxy(k: float) -> float:
    """Finite stand-in for the extreme contrasts ``k = 0`` and ``k = inf``."""
    k = float(k)
    if k == 0:
        return K_ZERO_PROXY
    if np.isinf(k):
        return K_INF_PROXY
    if not k > 0:
        raise ParameterError("conductivity contrast must be positive, 0 or inf")
    return k


@dataclass
class CellProblem:
    """Rasterized unit cell ``(-1/2, 1/2)^2`` with ``sigma = 1 + (k_eff - 1) chi(D)``."""

    gridN: int
    mask: np.ndarray
    k_eff: float

    @property
    def sigma(self) -> np.ndarray:
        return np.where(self.mask, self.k_eff, 1.0)

    @property
    def volume_fraction(self) -> float:
        return float(self.mask.mean())

    @property
    def centers(self) -> np.ndarray:
        return -0.5 + (np.arange(self.gridN) + 0.5) / self.gridN


@dataclass
class EffectiveResult:
    sigma_star: np.ndarray
    residual: float
    gridN: int


def rasterize(shape, rho: float, gridN: int, k: float = 0.0) -> CellProblem:
    """Cell problem for ``D = rho * shape``.

    ``shape`` is a :class:`LaurentMap` (sampled at 4096 boundary points) or an
    array of polygon vertices; cell centres are classified by winding number.
    """
    if gridN < 4:
        raise ParameterError("gridN must be at least 4")
    if not rho > 0:
        raise ParameterError("rho must be positive")
    if isinstance(shape, LaurentMap):
        poly = boundary_sample(shape, BOUNDARY_SAMPLES).points
    else:
        poly = np.asarray(shape, dtype=complex)
    poly = rho * poly
    if max(np.abs(poly.real).max(), np.abs(poly.imag).max()) >= 0.5:
        raise GeometryError("inclusion touches the cell boundary")
    c = -0.5 + (np.arange(gridN) + 0.5) / gridN
    mask = rasterize_polygon(poly, c, c)
    return CellProblem(gridN=gridN, mask=mask, k_eff=contrast_proxy(k))


def _face_conductivities(sigma):
    """Harmonic means on the faces ``(p, p+1)`` in each direction, periodic."""
    out = []
    for ax in (0, 1):
        nb = np.roll(sigma, -1, axis=ax)
        out.append(2 * sigma * nb / (sigma + nb))
    return out


def _operator(faces, N):
    """Periodic 5-point finite-volume operator (positive semi-definite)."""
    idx = np.arange(N * N).reshape(N, N)
    rows, cols, vals = [], [], []
    diag = np.zeros((N, N))
    for ax, s in enumerate(faces):
        nb = np.roll(idx, -1, axis=ax)
        rows += [idx.ravel(), nb.ravel()]
        cols += [nb.ravel(), idx.ravel()]
        vals += [-s.ravel(), -s.ravel()]
        diag += s + np.roll(s, 1, axis=ax)
    rows.append(idx.ravel())
    cols.append(idx.ravel())
    vals.append(diag.ravel())
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(N * N, N * N))


def _solve_cell(problem: CellProblem, i: int, maxiter: int = 500):
    if i not in (1, 2):
        raise ParameterError("direction must be 1 or 2")
    N = problem.gridN
    h = 1.0 / N
    faces = _face_conductivities(problem.sigma)
    A = _operator(faces, N)
    F = faces[i - 1] * h
    b = (F - np.roll(F, 1, axis=i - 1)).ravel()
    # pin one node to remove the constant null space
    Ar = A[1:, 1:].tocsr()
    ml = pyamg.smoothed_aggregation_solver(Ar, symmetry="symmetric")
    x = np.zeros(N * N)
    x[1:] = ml.solve(b[1:], tol=SOLVER_TOL, accel="cg", maxiter=maxiter)
    res = float(np.linalg.norm(b - A @ x) / max(np.linalg.norm(b), 1e-300))
    if not res <= 100 * SOLVER_TOL:
        raise SolverError(f"cell solve did not converge (relative residual {res:.3e})", residual=res)
    v = (x - x.mean()).reshape(N, N)
    y = problem.centers
    lin = y[:, None] if i == 1 else y[None, :]
    return v + lin, res


def solve_cell(problem: CellProblem, i: int, maxiter: int = 500) -> np.ndarray:
    """Corrector ``u_i`` with ``u_i - y_i`` periodic and mean zero, on cell centres."""
    return _solve_cell(problem, i, maxiter)[0]


def effective_fdm(problem: CellProblem) -> EffectiveResult:
    """``sigma*_ij`` as the discrete energy ``sum_faces sigma_f du_i du_j``."""
    N = problem.gridN
    h = 1.0 / N
    faces = _face_conductivities(problem.sigma)
    grads, residual = [], 0.0
    for i in (1, 2):
        u, res = _solve_cell(problem, i)
        residual = max(residual, res)
        v = u - (problem.centers[:, None] if i == 1 else problem.centers[None, :])
        # periodic differences of v plus the exact jump of y_i across each face
        grads.append([np.roll(v, -1, axis=ax) - v + (h if ax == i - 1 else 0.0) for ax in (0, 1)])
    S = np.empty((2, 2))
    for a in range(2):
        for b in range(2):
            S[a, b] = sum(float((faces[ax] * grads[a][ax] * grads[b][ax]).sum()) for ax in (0, 1))
    S = (S + S.T) / 2
    return EffectiveResult(sigma_star=S, residual=residual, gridN=N)
