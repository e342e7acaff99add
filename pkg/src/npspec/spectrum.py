"""Finite sections of the Neumann-Poincare operator and their eigenvalues."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .exceptions import ConsistencyError, ParameterError
from .faber import MuMatrix, mu_from_map
from .laurent import LaurentMap, validate

ROUNDOFF_FLOOR = 2.6161e-13
HERMITIAN_ATOL = 1e-12


@dataclass(frozen=True)
class FiniteSection:
    """Matrix of ``P_n K* P_n`` in the basis ``zeta_{-n}..zeta_{-1}, zeta_1..zeta_n``."""

    n: int
    matrix: np.ndarray


@dataclass
class SpectrumResult:
    lambdas: np.ndarray
    steps_used: int
    history: np.ndarray  # (steps_used, kmax), row s-1 is lambda^{(s)}
    r: np.ndarray  # (steps_used, kmax), row 0 is NaN
    converged: np.ndarray
    floor_flagged: np.ndarray
    stopped: bool
    sizes: list = field(default_factory=list)

    @property
    def kmax(self) -> int:
        return int(self.lambdas.size)

    def max_r(self) -> np.ndarray:
        """``max_k r_k`` for steps 2..steps_used."""
        return np.nanmax(self.r[1:], axis=1)


def _mu_array(mu) -> np.ndarray:
    return mu.mu if isinstance(mu, MuMatrix) else np.asarray(mu)


def assemble_section(mu, n: int) -> FiniteSection:
    mu = _mu_array(mu)
    if mu.shape[0] < n:
        raise ParameterError(f"mu matrix of order {mu.shape[0]} cannot give section n={n}")
    block = mu[:n, :n] / 2
    # rows/cols 0..n-1 are zeta_{-1}..zeta_{-n} reversed to zeta_{-n}..zeta_{-1}
    rev = block[::-1, :]
    mat = np.zeros((2 * n, 2 * n), dtype=complex)
    mat[:n, n:] = rev
    mat[n:, :n] = rev.conj().T
    return FiniteSection(n=n, matrix=mat)


def eigenvalues(section: FiniteSection) -> np.ndarray:
    """All ``2n`` eigenvalues of the section, ascending."""
    a = section.matrix
    err = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if err > HERMITIAN_ATOL:
        raise ConsistencyError(f"section is not Hermitian (deviation {err:.3e})")
    return sla.eigvalsh(a)


def section_singular_values(mu, n: int) -> np.ndarray:
    """Positive eigenvalues of the ``n``-th section, descending.

    The section is ``[[0, B], [B^H, 0]]`` with ``B = mu_n / 2``, so its
    eigenvalues are plus and minus the singular values of ``B``.
    """
    return sla.svdvals(_mu_array(mu)[:n, :n]) / 2


def _relative_change(cur, prev):
    diff = np.abs(cur - prev)
    den = np.abs(cur)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(den > 0, diff / den, np.where(diff > 0, np.inf, 0.0))
    return r


def adaptive_spectrum(
    m: LaurentMap,
    kmax: int = 30,
    *,
    step_size: int = 100,
    max_step: int = 16,
    window: int = 5,
    threshold: float = 1e-5,
    floor: float = ROUNDOFF_FLOOR,
    method: str = "svd",
    check: bool = True,
) -> SpectrumResult:
    """Increase the section order ``n = step_size * step`` until the leading
    ``kmax`` eigenvalues have relative changes below ``threshold`` for
    ``window`` consecutive steps, or ``max_step`` is reached.
    """
    if kmax < 1 or kmax > step_size:
        raise ParameterError(f"kmax must lie in [1, {step_size}]")
    if max_step < 2 or window < 1:
        raise ParameterError("need max_step >= 2 and window >= 1")
    if method not in ("svd", "eigh"):
        raise ParameterError("method must be 'svd' or 'eigh'")
    if check:
        validate(m)
    mu = mu_from_map(m, step_size * max_step).mu

    history, rs, sizes = [], [], []
    stopped = False
    for step in range(1, max_step + 1):
        n = step_size * step
        if method == "svd":
            lam = section_singular_values(mu, n)[:kmax]
        else:
            ev = eigenvalues(assemble_section(mu, n))
            lam = ev[::-1][:kmax]
        history.append(lam)
        sizes.append(n)
        rs.append(np.full(kmax, np.nan) if step == 1 else _relative_change(lam, history[-2]))
        if step > window:
            recent = np.array(rs[-window:])
            if np.all(recent < threshold):
                stopped = True
                break

    history = np.array(history)
    rs = np.array(rs)
    steps = len(history)
    lambdas = history[-1].copy()
    if stopped:
        converged = np.ones(kmax, dtype=bool)
    else:
        converged = np.all(rs[-window:] < threshold, axis=0)
    floor_flagged = ~converged & (np.abs(lambdas) < floor)
    return SpectrumResult(
        lambdas=lambdas,
        steps_used=steps,
        history=history,
        r=rs,
        converged=converged,
        floor_flagged=floor_flagged,
        stopped=stopped,
        sizes=sizes,
    )


def cluster_asymptotics(m: int, delta: float) -> np.ndarray:
    """Small-``delta`` eigenvalues of the map ``z + delta / z**m``.

    Returns the multiset ``(delta/2) * {+-sqrt(j (m + 1 - j)) : j = 1..m}``,
    sorted in descending order.
    """
    if m < 1:
        raise ParameterError("m must be >= 1")
    j = np.arange(1, m + 1)
    pos = delta / 2 * np.sqrt(j * (m + 1 - j))
    return np.sort(np.concatenate([pos, -pos]))[::-1]
