"""Dense complex matrix kernel.

Operators are plain ``numpy`` arrays of dtype ``complex128``; every public
function accepts anything ``as_matrix`` understands.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NotContraction, NotHermitian, NotPSD

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "Subspace",
    "as_matrix",
    "adj",
    "operator_norm",
    "psd_sqrt",
    "defect",
    "pinv",
    "pinv_apply",
    "svd",
    "psd_leq",
    "assemble_blocks",
    "extract_block",
    "orth",
    "orth_complement",
    "block_diag",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds threaded through every solver.

    rank_tol
        relative singular-value cutoff, ``sigma <= rank_tol * sigma_max`` is zero.
    psd_tol
        slack allowed on negative eigenvalues and on ``norm <= 1`` tests.
    residual_tol
        largest operator-norm residual an identity may carry and still pass.
    """

    rank_tol: float = 1e-10
    psd_tol: float = 1e-10
    residual_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_tol", "psd_tol", "residual_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")

    def as_dict(self) -> dict:
        return {"rank_tol": self.rank_tol, "psd_tol": self.psd_tol,
                "residual_tol": self.residual_tol}


DEFAULT_TOL = Tolerances()


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex128 array (scalars become 1x1)."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} has non-finite entries")
    return A


def adj(M: np.ndarray) -> np.ndarray:
    return M.conj().T


def operator_norm(M) -> float:
    """Largest singular value (0 for empty matrices)."""
    A = as_matrix(M)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def _check_hermitian(P: np.ndarray, tol: Tolerances, name: str) -> None:
    if P.shape[0] != P.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got {P.shape}")
    if P.size and operator_norm(P - adj(P)) > tol.residual_tol * max(1.0, operator_norm(P)):
        raise NotHermitian(f"{name} is not Hermitian")


def psd_sqrt(P, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues in ``[-psd_tol, 0)`` are clamped."""
    P = as_matrix(P, "P")
    _check_hermitian(P, tol, "P")
    if P.size == 0:
        return P.copy()
    H = (P + adj(P)) / 2
    w, U = np.linalg.eigh(H)
    scale = max(1.0, float(np.max(np.abs(w))))
    if w[0] < -tol.psd_tol * scale:
        raise NotPSD(f"minimum eigenvalue {w[0]:.3e} below -psd_tol")
    w = np.sqrt(np.clip(w, 0.0, None))
    Q = (U * w) @ adj(U)
    return (Q + adj(Q)) / 2


def defect(T, side: str = "right", tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Defect operator of a contraction.

    ``side="right"`` gives ``(I - T*T)^(1/2)`` on the domain, ``side="left"``
    gives ``(I - TT*)^(1/2)`` on the codomain.
    """
    T = as_matrix(T, "T")
    nrm = operator_norm(T)
    if nrm > 1.0 + tol.psd_tol:
        raise NotContraction(f"operator norm {nrm:.12g} exceeds 1",
                             hypothesis="||T|| <= 1")
    if side == "right":
        G = adj(T) @ T
    elif side == "left":
        G = T @ adj(T)
    else:
        raise ValueError("side must be 'left' or 'right'")
    G = (G + adj(G)) / 2
    n = G.shape[0]
    w, U = np.linalg.eigh(np.eye(n) - G)
    # eigenvalues at rounding level are zeros; their square roots (~1e-8) are not noise-sized
    floor = 64.0 * n * np.finfo(float).eps
    w = np.sqrt(np.where(w > floor, w, 0.0))
    D = (U * w) @ adj(U)
    return (D + adj(D)) / 2


def svd(M: np.ndarray, full_matrices: bool = False):
    """SVD that falls back to the slower ``gesvd`` driver if ``gesdd`` returns non-finite factors."""
    U, s, Vh = np.linalg.svd(M, full_matrices=full_matrices)
    if not (np.isfinite(U).all() and np.isfinite(s).all() and np.isfinite(Vh).all()):
        U, s, Vh = scipy.linalg.svd(M, full_matrices=full_matrices, lapack_driver="gesvd")
    return U, s, Vh


def pinv(M, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse; ``sigma <= rank_tol * sigma_max`` is treated as 0."""
    M = as_matrix(M, "M")
    m, n = M.shape
    if M.size == 0:
        return np.zeros((n, m), dtype=np.complex128)
    U, s, Vh = svd(M)
    if s[0] == 0.0:
        return np.zeros((n, m), dtype=np.complex128)
    keep = s > tol.rank_tol * s[0]
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (adj(Vh) * inv) @ adj(U)


def pinv_apply(M, rhs, tol: Tolerances = DEFAULT_TOL, side: str = "left") -> np.ndarray:
    """``pinv(M) @ rhs`` (or ``rhs @ pinv(M)`` for ``side="right"``) in factored form.

    Never forms the pseudoinverse, so ill-conditioned ``M`` does not smear
    rounding error across well-resolved directions.
    """
    M = as_matrix(M, "M")
    rhs = as_matrix(rhs, "rhs")
    m, n = M.shape
    if side == "right":
        return adj(pinv_apply(adj(M), adj(rhs), tol))
    if rhs.shape[0] != m:
        raise DimensionMismatch(f"rhs has {rhs.shape[0]} rows, M has {m}")
    if M.size == 0:
        return np.zeros((n, rhs.shape[1]), dtype=np.complex128)
    U, s, Vh = svd(M)
    if s[0] == 0.0:
        return np.zeros((n, rhs.shape[1]), dtype=np.complex128)
    keep = s > tol.rank_tol * s[0]
    coeff = (adj(U[:, keep]) @ rhs) / s[keep, None]
    return adj(Vh[keep]) @ coeff


def psd_leq(A, B, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``A <= B`` in the Loewner order, up to ``psd_tol`` (scaled by ``max(1, ||B||)``)."""
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes differ: {A.shape} vs {B.shape}")
    _check_hermitian(A, tol, "A")
    _check_hermitian(B, tol, "B")
    if A.size == 0:
        return True
    Dif = B - A
    w = np.linalg.eigvalsh((Dif + adj(Dif)) / 2)
    scale = max(1.0, operator_norm(A), operator_norm(B))
    return bool(w[0] >= -tol.psd_tol * scale)


def assemble_blocks(grid: Sequence[Sequence[np.ndarray | None]],
                    row_sizes: Sequence[int] | None = None,
                    col_sizes: Sequence[int] | None = None) -> np.ndarray:
    """Assemble a block matrix; ``None`` entries are zero blocks.

    Block sizes are inferred from the non-``None`` entries; rows or columns
    made only of ``None`` need explicit ``row_sizes``/``col_sizes``.
    """
    nr = len(grid)
    nc = len(grid[0]) if nr else 0
    if any(len(row) != nc for row in grid):
        raise DimensionMismatch("grid is not rectangular")
    rs = list(row_sizes) if row_sizes is not None else [None] * nr
    cs = list(col_sizes) if col_sizes is not None else [None] * nc
    if len(rs) != nr or len(cs) != nc:
        raise DimensionMismatch("size hints do not match the grid")
    blocks = [[None if b is None else as_matrix(b) for b in row] for row in grid]
    for i, row in enumerate(blocks):
        for j, b in enumerate(row):
            if b is None:
                continue
            for sizes, k, got in ((rs, i, b.shape[0]), (cs, j, b.shape[1])):
                if sizes[k] is None:
                    sizes[k] = got
                elif sizes[k] != got:
                    raise DimensionMismatch(f"block ({i},{j}) has shape {b.shape}, "
                                            f"expected ({rs[i]}, {cs[j]})")
    if any(s is None for s in rs) or any(s is None for s in cs):
        raise DimensionMismatch("cannot infer the size of an all-zero block row/column")
    out = np.zeros((sum(rs), sum(cs)), dtype=np.complex128)
    r0 = np.concatenate([[0], np.cumsum(rs)]).astype(int)
    c0 = np.concatenate([[0], np.cumsum(cs)]).astype(int)
    for i, row in enumerate(blocks):
        for j, b in enumerate(row):
            if b is not None:
                out[r0[i]:r0[i + 1], c0[j]:c0[j + 1]] = b
    return out


def extract_block(M: np.ndarray, row_sizes: Sequence[int], col_sizes: Sequence[int],
                  i: int, j: int) -> np.ndarray:
    if sum(row_sizes) != M.shape[0] or sum(col_sizes) != M.shape[1]:
        raise DimensionMismatch("block sizes do not partition the matrix")
    r = int(sum(row_sizes[:i]))
    c = int(sum(col_sizes[:j]))
    return M[r:r + row_sizes[i], c:c + col_sizes[j]].copy()


def block_diag(*blocks) -> np.ndarray:
    mats = [as_matrix(b) for b in blocks]
    if not mats:
        return np.zeros((0, 0), dtype=np.complex128)
    return scipy.linalg.block_diag(*mats).astype(np.complex128)


def orth(M, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the range, rank decided by ``rank_tol``."""
    M = as_matrix(M)
    if M.size == 0:
        return np.zeros((M.shape[0], 0), dtype=np.complex128)
    U, s, _ = svd(M)
    if s[0] == 0.0:
        return np.zeros((M.shape[0], 0), dtype=np.complex128)
    return U[:, s > tol.rank_tol * s[0]]


def orth_complement(Q: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``range(Q)``."""
    Q = as_matrix(Q)
    n, k = Q.shape
    if k == 0:
        return np.eye(n, dtype=np.complex128)
    U, _, _ = svd(Q, full_matrices=True)
    return U[:, k:]


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of ``C^ambient_dim`` carried by an orthonormal column basis."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        B = as_matrix(self.basis, "basis")
        if B.shape[0] != self.ambient_dim:
            raise DimensionMismatch(f"basis has {B.shape[0]} rows, ambient is {self.ambient_dim}")
        object.__setattr__(self, "basis", B)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def span(cls, vectors, tol: Tolerances = DEFAULT_TOL) -> "Subspace":
        V = as_matrix(vectors)
        return cls(V.shape[0], orth(V, tol))

    @classmethod
    def coordinate(cls, ambient_dim: int, indices) -> "Subspace":
        idx = np.asarray(list(indices), dtype=int)
        return cls(ambient_dim, np.eye(ambient_dim, dtype=np.complex128)[:, idx])

    def projection(self) -> np.ndarray:
        return self.basis @ adj(self.basis)

    def complement(self) -> "Subspace":
        return Subspace(self.ambient_dim, orth_complement(self.basis))

    def orthonormality_defect(self) -> float:
        return operator_norm(adj(self.basis) @ self.basis - np.eye(self.dim))
