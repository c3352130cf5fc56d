"""Truncated Schaeffer dilations, co-isometric extensions and unitary dilations.

Every builder keeps a full copy of ``H`` per defect level, so all blocks have
size ``dim H``.  Coordinates are ordered ``[H, +1, ..., +N, -1, ..., -M]``:
positive levels carry the isometric part, negative levels (unitary dilations
only) the co-isometric part.  The one-sided dilation is therefore always the
leading principal block of the two-sided one.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, LevelOutOfRange, NotContraction, QOutOfRange
from .linalg import (DEFAULT_TOL, Subspace, Tolerances, adj, as_matrix, defect,
                     operator_norm, orth)

__all__ = [
    "ChainSpace",
    "DilationBundle",
    "schaeffer_isometric",
    "coisometric_extension",
    "unitary_dilation",
    "q_scaled_coextension",
    "minimal_reducing_subspace",
    "chain_projection",
    "chain_intertwining_residual",
]

ISOMETRIC = "isometric"
COISOMETRIC = "co-isometric"
UNITARY = "unitary"


@dataclass(frozen=True)
class ChainSpace:
    """``H`` followed by ``levels`` positive and ``neg_levels`` negative defect copies."""

    base_dim: int
    block_dim: int
    levels: int
    neg_levels: int = 0

    def __post_init__(self):
        if min(self.base_dim, self.block_dim, self.levels, self.neg_levels) < 0:
            raise ValueError("dimensions and level counts must be non-negative")

    @property
    def dim(self) -> int:
        return self.base_dim + (self.levels + self.neg_levels) * self.block_dim

    @property
    def layout(self) -> list[tuple[int, int, int]]:
        """``(level, start, stop)`` for every block, in storage order."""
        out = [(0, 0, self.base_dim)]
        start = self.base_dim
        for level in list(range(1, self.levels + 1)) + [-k for k in range(1, self.neg_levels + 1)]:
            out.append((level, start, start + self.block_dim))
            start += self.block_dim
        return out

    def block(self, level: int) -> slice:
        for lv, a, b in self.layout:
            if lv == level:
                return slice(a, b)
        raise LevelOutOfRange(f"level {level} not in chain")

    def upto(self, n: int) -> np.ndarray:
        """Coordinates of ``H`` plus positive levels ``1..n``."""
        if not 0 <= n <= self.levels:
            raise LevelOutOfRange(f"n={n} outside 0..{self.levels}")
        return np.arange(self.base_dim + n * self.block_dim)

    def upto_negative(self, n: int) -> np.ndarray:
        """All positive levels plus negative levels ``-1..-n``."""
        if not 0 <= n <= self.neg_levels:
            raise LevelOutOfRange(f"n={n} outside 0..{self.neg_levels}")
        return np.arange(self.base_dim + (self.levels + n) * self.block_dim)

    def projection(self, idx) -> np.ndarray:
        P = np.zeros((self.dim, self.dim), dtype=np.complex128)
        idx = np.asarray(idx, dtype=int)
        P[idx, idx] = 1.0
        return P

    def subspace(self, idx) -> Subspace:
        return Subspace.coordinate(self.dim, idx)


@dataclass(frozen=True, eq=False)
class DilationBundle:
    op: np.ndarray
    chain: ChainSpace
    kind: str
    source: np.ndarray
    q_scale: complex = 1.0
    meta: dict = field(default_factory=dict)

    @property
    def base(self) -> slice:
        return slice(0, self.chain.base_dim)

    def compress(self, M: np.ndarray) -> np.ndarray:
        """``P_H M |_H``."""
        return M[self.base, self.base]

    def boundary(self) -> tuple[np.ndarray, np.ndarray]:
        """Boolean masks ``(rows, cols)`` of the truncation boundary.

        Isometric kinds lose the last positive block column, co-isometric kinds
        the last block row; unitary dilations lose the last positive column and
        the last negative row.
        """
        n = self.chain.dim
        rows = np.zeros(n, dtype=bool)
        cols = np.zeros(n, dtype=bool)
        ch = self.chain
        if ch.levels == 0 and ch.neg_levels == 0:
            # no truncation slack: the defect is carried on H itself
            rows[:] = self.kind in (COISOMETRIC, UNITARY)
            cols[:] = self.kind in (ISOMETRIC, UNITARY)
            return rows, cols
        if self.kind == ISOMETRIC:
            cols[ch.block(ch.levels) if ch.levels else self.base] = True
        elif self.kind == COISOMETRIC:
            rows[ch.block(ch.levels) if ch.levels else self.base] = True
        else:
            cols[ch.block(ch.levels) if ch.levels else self.base] = True
            rows[ch.block(-ch.neg_levels) if ch.neg_levels else self.base] = True
        return rows, cols

    def isometry_defect(self) -> float:
        """``||(op* op - I)`` on interior columns``||``."""
        _, bcols = self.boundary()
        keep = ~bcols
        G = adj(self.op) @ self.op - np.eye(self.chain.dim)
        return operator_norm(G[np.ix_(keep, keep)]) if keep.any() else 0.0

    def coisometry_defect(self) -> float:
        brows, _ = self.boundary()
        keep = ~brows
        G = self.op @ adj(self.op) - np.eye(self.chain.dim)
        return operator_norm(G[np.ix_(keep, keep)]) if keep.any() else 0.0

    def compression_residuals(self, max_power: int | None = None) -> dict[int, float]:
        """``||P_H op^k|_H - source^k||`` for ``0 <= k <= max_power``.

        Unitary bundles also report ``k < 0`` using adjoint powers.
        """
        kmax = self.chain.levels if max_power is None else max_power
        out = {}
        d = self.chain.base_dim
        P = np.eye(self.chain.dim, dtype=np.complex128)
        Tk = np.eye(d, dtype=np.complex128)
        for k in range(kmax + 1):
            out[k] = operator_norm(self.compress(P) - Tk)
            P = P @ self.op
            Tk = Tk @ self.source
        if self.kind == UNITARY:
            P = adj(self.op)
            Tk = adj(self.source)
            for k in range(1, kmax + 1):
                out[-k] = operator_norm(self.compress(P) - Tk)
                P = P @ adj(self.op)
                Tk = Tk @ adj(self.source)
        return out


def _square_contraction(T, tol: Tolerances, name: str = "T") -> np.ndarray:
    T = as_matrix(T, name)
    if T.shape[0] != T.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got {T.shape}")
    nrm = operator_norm(T)
    if nrm > 1.0 + tol.psd_tol:
        raise NotContraction(f"||{name}|| = {nrm:.12g} > 1", hypothesis=f"||{name}|| <= 1")
    return T


def _schaeffer_matrix(T: np.ndarray, N: int, tol: Tolerances) -> np.ndarray:
    d = T.shape[0]
    V = np.zeros((d * (N + 1), d * (N + 1)), dtype=np.complex128)
    V[:d, :d] = T
    if N >= 1:
        V[d:2 * d, :d] = defect(T, "right", tol)
    for k in range(1, N):
        V[(k + 1) * d:(k + 2) * d, k * d:(k + 1) * d] = np.eye(d)
    return V


def schaeffer_isometric(T, N: int, tol: Tolerances = DEFAULT_TOL) -> DilationBundle:
    """Truncated Schaeffer isometric dilation on ``H + D_T^N``.

    The matrix is block lower triangular with first column ``(T, D_T, 0, ...)``
    and identities on the subdiagonal; the last block column is cut off.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    T = _square_contraction(T, tol)
    d = T.shape[0]
    return DilationBundle(_schaeffer_matrix(T, N, tol), ChainSpace(d, d, N), ISOMETRIC, T)


def coisometric_extension(T, N: int, tol: Tolerances = DEFAULT_TOL) -> DilationBundle:
    """Truncated co-isometric extension of ``T``: the adjoint of the dilation of ``T*``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    T = _square_contraction(T, tol)
    d = T.shape[0]
    V = adj(_schaeffer_matrix(adj(T), N, tol))
    return DilationBundle(V, ChainSpace(d, d, N), COISOMETRIC, T)


def unitary_dilation(T, N: int, tol: Tolerances = DEFAULT_TOL) -> DilationBundle:
    """Two-sided truncated unitary dilation with ``N`` defect copies per side.

    ``H`` and level ``-1`` are coupled into ``H`` and level ``+1`` by
    ``[[T, D_{T*}], [D_T, -T*]]``; every other level is shifted by one.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    T = _square_contraction(T, tol)
    d = T.shape[0]
    chain = ChainSpace(d, d, N, N)
    U = np.zeros((chain.dim, chain.dim), dtype=np.complex128)
    U[:d * (N + 1), :d * (N + 1)] = _schaeffer_matrix(T, N, tol)
    if N >= 1:
        h, p1, m1 = chain.block(0), chain.block(1), chain.block(-1)
        U[h, m1] = defect(T, "left", tol)
        U[p1, m1] = -adj(T)
        for k in range(2, N + 1):
            U[chain.block(-(k - 1)), chain.block(-k)] = np.eye(d)
    return DilationBundle(U, chain, UNITARY, T)


def q_scaled_coextension(T, q: complex, N: int, tol: Tolerances = DEFAULT_TOL) -> DilationBundle:
    """Co-isometric extension of ``qT``; ``V_q`` is ``op / q``."""
    T = as_matrix(T, "T")
    q = complex(q)
    if q == 0:
        raise QOutOfRange("q must be nonzero", hypothesis="0 < |q|")
    nrm = operator_norm(T)
    if abs(q) * nrm > 1.0 + tol.psd_tol:
        raise QOutOfRange(f"|q| * ||T|| = {abs(q) * nrm:.12g} > 1",
                          hypothesis="0 < |q| <= 1/||T||")
    b = coisometric_extension(q * T, N, tol)
    return DilationBundle(b.op, b.chain, b.kind, b.source, q_scale=q)


def minimal_reducing_subspace(V, H: Subspace, tol: Tolerances = DEFAULT_TOL,
                              max_iter: int | None = None) -> Subspace:
    """Smallest subspace containing ``H`` and invariant under ``V`` and ``V*``."""
    V = as_matrix(V, "V")
    if V.shape[0] != V.shape[1] or V.shape[0] != H.ambient_dim:
        raise DimensionMismatch("V must be square on the ambient space of H")
    Q = orth(H.basis, tol)
    limit = V.shape[0] + 1 if max_iter is None else max_iter
    for _ in range(limit):
        grown = orth(np.hstack([Q, V @ Q, adj(V) @ Q]), tol)
        if grown.shape[1] == Q.shape[1]:
            return Subspace(H.ambient_dim, grown)
        Q = grown
    return Subspace(H.ambient_dim, Q)


def chain_projection(b: DilationBundle, n: int) -> np.ndarray:
    """Orthogonal projection onto ``H`` and the first ``n`` defect levels."""
    return b.chain.projection(b.chain.upto(n))


def chain_intertwining_residual(b: DilationBundle, n: int) -> float:
    """Residual of the chain shift identity at level ``n``.

    Co-isometric bundles: ``P_{n+1} V* = V* P_n``; isometric bundles:
    ``P_{n+1} V = V P_n``.  Requires ``n + 1 <= levels``.
    """
    if not 0 <= n < b.chain.levels:
        raise LevelOutOfRange(f"need 0 <= n < {b.chain.levels}, got {n}")
    M = adj(b.op) if b.kind == COISOMETRIC else b.op
    P0 = chain_projection(b, n)
    P1 = chain_projection(b, n + 1)
    return operator_norm(P1 @ M - M @ P0)
