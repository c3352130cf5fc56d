"""Factorization and completion solvers.

Douglas range inclusion, its two-term form, the central Parrott completion,
the simultaneous extension of an operator and an adjoint (dual Parrott), and
the lower-triangular contraction completion.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (DimensionMismatch, Incompatible, NotCompletable, NotContraction,
                     OrderViolated, RangeViolation)
from .linalg import (DEFAULT_TOL, Subspace, Tolerances, adj, as_matrix, assemble_blocks,
                     defect, operator_norm, pinv, pinv_apply, psd_leq)

__all__ = [
    "DualParrottProblem",
    "Extension",
    "douglas_solve",
    "two_term_douglas",
    "parrott_complete",
    "dual_parrott_extend",
    "triangular_complete",
    "triangular_extract",
]


def douglas_solve(A, B, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Contraction ``Z`` with ``A = B Z``, which exists iff ``AA* <= BB*``.

    Returns the minimal-norm solution ``pinv(B) A``.
    """
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatch(f"A and B need a common codomain: {A.shape} vs {B.shape}")
    if not psd_leq(A @ adj(A), B @ adj(B), tol):
        raise OrderViolated("AA* <= BB* fails; no contractive factor exists",
                            hypothesis="AA* <= BB*")
    return pinv_apply(B, A, tol)


def two_term_douglas(A0, A1, A2, tol: Tolerances = DEFAULT_TOL):
    """``Z1, Z2`` with ``A1 Z1 + A2 Z2 = A0`` and ``Z1*Z1 + Z2*Z2 <= I``."""
    A0 = as_matrix(A0, "A0")
    A1 = as_matrix(A1, "A1")
    A2 = as_matrix(A2, "A2")
    if not A0.shape[0] == A1.shape[0] == A2.shape[0]:
        raise DimensionMismatch("A0, A1, A2 must share a codomain")
    Z = douglas_solve(A0, np.hstack([A1, A2]), tol)
    k = A1.shape[1]
    return Z[:k], Z[k:]


def parrott_complete(A, B, C, tol: Tolerances = DEFAULT_TOL):
    """Central completion of ``[[A, B], [C, ?]]``.

    Returns ``(D, mu)`` where ``mu = max(||[A; C]||, ||[A, B]||)`` is the
    smallest achievable norm and ``D`` attains it.
    """
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    C = as_matrix(C, "C")
    if B.shape[0] != A.shape[0] or C.shape[1] != A.shape[1]:
        raise DimensionMismatch(f"inconsistent blocks A{A.shape} B{B.shape} C{C.shape}")
    mu = max(operator_norm(np.vstack([A, C])), operator_norm(np.hstack([A, B])))
    D_shape = (C.shape[0], B.shape[1])
    if mu == 0.0:
        return np.zeros(D_shape, dtype=np.complex128), 0.0
    a, b, c = A / mu, B / mu, C / mu
    W = pinv_apply(defect(a, "right", tol), c, tol, side="right")
    V = pinv_apply(defect(a, "left", tol), b, tol)
    D = -W @ adj(a) @ V
    return mu * D, mu


@dataclass(frozen=True, eq=False)
class DualParrottProblem:
    """Extend ``X: H -> K'`` to ``Y: K -> K'`` with ``Y*`` extending ``Xp: H' -> K``.

    ``X`` acts on coordinates with respect to ``H.basis`` and returns vectors of
    the full codomain; ``Xp`` likewise for ``Hp``.
    """

    ambient_domain: int
    ambient_codomain: int
    H: Subspace
    Hp: Subspace
    X: np.ndarray
    Xp: np.ndarray

    def __post_init__(self):
        X = as_matrix(self.X, "X")
        Xp = as_matrix(self.Xp, "Xp")
        if self.H.ambient_dim != self.ambient_domain:
            raise DimensionMismatch("H does not live in the domain")
        if self.Hp.ambient_dim != self.ambient_codomain:
            raise DimensionMismatch("Hp does not live in the codomain")
        if X.shape != (self.ambient_codomain, self.H.dim):
            raise DimensionMismatch(f"X has shape {X.shape}, expected "
                                    f"{(self.ambient_codomain, self.H.dim)}")
        if Xp.shape != (self.ambient_domain, self.Hp.dim):
            raise DimensionMismatch(f"Xp has shape {Xp.shape}, expected "
                                    f"{(self.ambient_domain, self.Hp.dim)}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Xp", Xp)

    def compatibility_residual(self) -> float:
        """``||Q'* X - Xp* Q||``, the matrix form of ``<Xh, h'> = <h, X'h'>``."""
        gap = adj(self.Hp.basis) @ self.X - adj(self.Xp) @ self.H.basis
        return operator_norm(gap)


@dataclass(frozen=True, eq=False)
class Extension:
    """Output of ``dual_parrott_extend``."""

    op: np.ndarray
    norm: float
    bound: float
    extension_residual: float
    adjoint_extension_residual: float
    compatibility_residual: float


def dual_parrott_extend(p: DualParrottProblem, tol: Tolerances = DEFAULT_TOL) -> Extension:
    comp = p.compatibility_residual()
    scale = 1.0 + max(operator_norm(p.X), operator_norm(p.Xp))
    if comp > tol.residual_tol * scale:
        raise Incompatible(f"pairing identity fails with residual {comp:.3e}",
                           hypothesis="<Xh, h'> = <h, X'h'>")
    Q, Qc = p.H.basis, p.H.complement().basis
    R, Rc = p.Hp.basis, p.Hp.complement().basis
    # block form w.r.t. K = H + H^perp and K' = H' + H'^perp
    A = adj(R) @ p.X
    C = adj(Rc) @ p.X
    B = adj(p.Xp) @ Qc
    D, mu = parrott_complete(A, B, C, tol)
    blocks = assemble_blocks([[A, B], [C, D]],
                             row_sizes=[R.shape[1], Rc.shape[1]],
                             col_sizes=[Q.shape[1], Qc.shape[1]])
    Y = np.hstack([R, Rc]) @ blocks @ adj(np.hstack([Q, Qc]))
    bound = max(operator_norm(p.X), operator_norm(p.Xp))
    return Extension(
        op=Y,
        norm=operator_norm(Y),
        bound=bound,
        extension_residual=operator_norm(Y @ Q - p.X),
        adjoint_extension_residual=operator_norm(adj(Y) @ R - p.Xp),
        compatibility_residual=comp,
    )


def triangular_complete(T1, T2, C, tol: Tolerances = DEFAULT_TOL):
    """``X = D_{T2*} C D_{T1}`` and the contraction ``[[T1, 0], [X, T2]]``."""
    T1 = as_matrix(T1, "T1")
    T2 = as_matrix(T2, "T2")
    C = as_matrix(C, "C")
    if C.shape != (T2.shape[0], T1.shape[1]):
        raise DimensionMismatch(f"C must map dom(T1) to cod(T2), got {C.shape}")
    if operator_norm(C) > 1.0 + tol.psd_tol:
        raise NotContraction("C is not a contraction", hypothesis="||C|| <= 1")
    X = defect(T2, "left", tol) @ C @ defect(T1, "right", tol)
    Y = assemble_blocks([[T1, None], [X, T2]])
    return X, Y


def triangular_extract(T1, T2, X, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Recover a contraction ``C`` with ``X = D_{T2*} C D_{T1}``."""
    T1 = as_matrix(T1, "T1")
    T2 = as_matrix(T2, "T2")
    X = as_matrix(X, "X")
    if X.shape != (T2.shape[0], T1.shape[1]):
        raise DimensionMismatch(f"X must map dom(T1) to cod(T2), got {X.shape}")
    DL = defect(T2, "left", tol)
    DR = defect(T1, "right", tol)
    DLp = pinv(DL, tol)
    DRp = pinv(DR, tol)
    scale = 1.0 + operator_norm(X)
    off_range = max(operator_norm(X - DL @ DLp @ X), operator_norm(X - X @ DRp @ DR))
    if off_range > tol.residual_tol * scale:
        raise RangeViolation(f"X is not supported on the defect ranges ({off_range:.3e})",
                             hypothesis="X = D_{T2*} C D_{T1}")
    Y = assemble_blocks([[T1, None], [X, T2]])
    nrm = operator_norm(Y)
    if nrm > 1.0 + tol.psd_tol:
        raise NotCompletable(f"[[T1, 0], [X, T2]] has norm {nrm:.12g} > 1",
                             hypothesis="||[[T1, 0], [X, T2]]|| <= 1")
    return DLp @ X @ DRp
