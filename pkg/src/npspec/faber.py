"""Faber polynomials and Grunsky coefficients of an exterior map."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .exceptions import ConsistencyError, ParameterError
from .laurent import LaurentMap

MU_SYMMETRY_ATOL = 1e-12


@dataclass(frozen=True)
class FaberSet:
    """``polys[m]`` holds the coefficients of ``F_m`` in increasing powers of ``z``."""

    polys: list

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, m):
        return self.polys[m]

    def evaluate(self, m: int, z):
        return P.polyval(np.asarray(z, dtype=complex), self.polys[m])


@dataclass(frozen=True)
class GrunskyMatrix:
    """Grunsky coefficients ``c[m-1, k-1] = c_{m,k}``.

    Coefficients are stored for the map rescaled to unit conformal radius,
    ``c_norm[m-1, k-1] = c_{m,k} / gamma**(m+k)``, which stays bounded for
    large orders; :attr:`c` restores the physical scaling.
    """

    c_norm: np.ndarray
    gamma: float

    @property
    def shape(self):
        return self.c_norm.shape

    @property
    def c(self) -> np.ndarray:
        M, K = self.c_norm.shape
        m = np.arange(1, M + 1)[:, None]
        k = np.arange(1, K + 1)[None, :]
        return self.c_norm * self.gamma ** (m + k)


@dataclass(frozen=True)
class MuMatrix:
    """Symmetrized Grunsky data ``mu[m-1, k-1] = sqrt(k/m) c_{m,k} / gamma**(m+k)``."""

    mu: np.ndarray

    @property
    def order(self) -> int:
        return int(self.mu.shape[0])


def faber_polynomials(m: LaurentMap, M: int) -> FaberSet:
    """Faber polynomials ``F_0 .. F_M`` from the generating-function recurrence.

    ``F_{n+1}(z) = (z - a0) F_n(z) - sum_{k=1}^{n} a_k F_{n-k}(z) - n a_n``.
    """
    if M < 0:
        raise ParameterError("M must be non-negative")
    polys = [np.array([1.0 + 0j])]
    shift = np.array([-m.a0, 1.0 + 0j])
    for n in range(M):
        nxt = P.polymul(shift, polys[n])
        for k in range(1, n + 1):
            ak = m.coefficient(k)
            if ak != 0:
                nxt = P.polysub(nxt, ak * polys[n - k])
        an = m.coefficient(n)
        if n >= 1 and an != 0:
            nxt = P.polysub(nxt, [n * an])
        polys.append(np.asarray(nxt, dtype=complex))
    return FaberSet(polys=polys)


def _normalized_grunsky(a: np.ndarray, M: int, K: int) -> np.ndarray:
    """Grunsky coefficients of ``w + sum a_j w^{-j}`` (unit conformal radius).

    Composes ``G_n(w) = F_n(Psi(w))`` as Laurent series with the recurrence
    ``G_{n+1} = (Psi - a0) G_n - sum_k a_k G_{n-k} - n a_n``; the positive
    powers cancel identically, so only the coefficients of ``w^{-l}`` are
    propagated.  Row ``n`` needs ``K + (M - n)`` columns, hence width ``K + M``.
    """
    N = a.size
    W = K + M + 1
    nz = [j for j in range(1, N + 1) if a[j - 1] != 0]
    # afull[i] = a_i for i >= 1, zero past the truncation
    afull = np.zeros(W + M + 1, dtype=complex)
    L = min(N, W + M)
    afull[1 : L + 1] = a[:L]
    rows = [np.zeros(W, dtype=complex)]  # G_0 = 1 has no negative powers
    for n in range(M):
        cur = rows[n]
        new = np.zeros(W, dtype=complex)
        # w * c_{n,l+1} w^{-l-1}
        new[1 : W - 1] = cur[2:W]
        # w^n * a_{n+l} w^{-n-l}
        new[1:] += afull[n + 1 : n + W]
        # (sum_j a_j w^{-j}) (sum_k c_{n,k} w^{-k})
        for j in nz:
            if j + 1 < W:
                new[j + 1 :] += a[j - 1] * cur[1 : W - j]
        # - sum_{k=1}^{n} a_k G_{n-k}, negative-power part
        for k in nz:
            if k > n:
                break
            new -= a[k - 1] * rows[n - k]
        rows.append(new)
    return np.array(rows[1:])[:, 1 : K + 1]


def grunsky_coefficients(m: LaurentMap, M: int, K: int | None = None) -> GrunskyMatrix:
    """Grunsky coefficients ``c_{m,k}`` for ``1 <= m <= M``, ``1 <= k <= K``."""
    K = M if K is None else K
    if M < 1 or K < 1:
        raise ParameterError("M and K must be at least 1")
    g = m.gamma
    n = np.arange(1, m.N + 1)
    a_norm = m.a / g ** (n + 1)
    return GrunskyMatrix(c_norm=_normalized_grunsky(a_norm, M, K), gamma=g)


def mu_matrix(g: GrunskyMatrix, atol: float = MU_SYMMETRY_ATOL) -> MuMatrix:
    M, K = g.shape
    if M != K:
        raise ParameterError("mu matrix needs a square Grunsky matrix")
    idx = np.arange(1, M + 1)
    mu = np.sqrt(idx[None, :] / idx[:, None]) * g.c_norm
    asym = np.max(np.abs(mu - mu.T)) if M else 0.0
    if asym > atol:
        raise ConsistencyError(f"mu matrix asymmetric by {asym:.3e}")
    return MuMatrix(mu=mu)


def mu_from_map(m: LaurentMap, M: int) -> MuMatrix:
    return mu_matrix(grunsky_coefficients(m, M, M))
