"""Shared lifting machinery: pair and result types, the one-step intertwining
lift, and the level-by-level co-extension engine."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..dilation import ChainSpace
from ..errors import (DimensionMismatch, HypothesisViolated, NotContraction, NotQCommuting,
                      QOutOfRange)
from ..factorization import DualParrottProblem, dual_parrott_extend, two_term_douglas
from ..linalg import (DEFAULT_TOL, Subspace, Tolerances, adj, as_matrix, defect,
                      operator_norm)

__all__ = ["QPair", "Residual", "LiftResult", "qpart_step", "RESIDUALS"]

Q_BOUND = "0 < |q| <= 1/||T1||"


@dataclass(frozen=True, eq=False)
class QPair:
    """Operators with ``T1 T2 = q T2 T1``; ``scale`` records any rescaling of ``T1``."""

    T1: np.ndarray
    T2: np.ndarray
    q: complex
    scale: float = 1.0

    def __post_init__(self):
        T1 = as_matrix(self.T1, "T1")
        T2 = as_matrix(self.T2, "T2")
        if T1.shape[0] != T1.shape[1] or T1.shape != T2.shape:
            raise DimensionMismatch(f"T1 {T1.shape} and T2 {T2.shape} must be square "
                                    "of the same size")
        object.__setattr__(self, "T1", T1)
        object.__setattr__(self, "T2", T2)
        object.__setattr__(self, "q", complex(self.q))

    @property
    def dim(self) -> int:
        return self.T1.shape[0]

    def commutation_residual(self) -> float:
        r = operator_norm(self.T1 @ self.T2 - self.q * self.T2 @ self.T1)
        return r / (1.0 + operator_norm(self.T1) * operator_norm(self.T2))

    def validate(self, tol: Tolerances = DEFAULT_TOL, q_bound: str = "dilation") -> None:
        """Raise unless the standing hypotheses hold.

        ``q_bound="dilation"`` enforces ``|q| ||T1|| <= 1``; ``"disk"`` enforces
        ``|q| <= 1``; ``"none"`` only requires ``q != 0``.
        """
        if self.q == 0:
            raise QOutOfRange("q must be nonzero", hypothesis="q != 0")
        n1 = operator_norm(self.T1)
        if n1 > 1.0 + tol.psd_tol:
            raise NotContraction(f"||T1|| = {n1:.12g} > 1", hypothesis="||T1|| <= 1")
        if q_bound == "dilation" and abs(self.q) * n1 > 1.0 + tol.psd_tol:
            raise QOutOfRange(f"|q| * ||T1|| = {abs(self.q) * n1:.12g} > 1; "
                              f"requires {Q_BOUND}", hypothesis=Q_BOUND)
        if q_bound == "disk" and abs(self.q) > 1.0 + tol.psd_tol:
            raise QOutOfRange(f"|q| = {abs(self.q):.12g} > 1; requires 0 < |q| <= 1",
                              hypothesis="0 < |q| <= 1")
        res = self.commutation_residual()
        if res > tol.residual_tol:
            raise NotQCommuting(f"||T1 T2 - q T2 T1|| / (1 + ||T1|| ||T2||) = {res:.3e}",
                                hypothesis="T1 T2 = q T2 T1")

    def adjoint(self) -> "QPair":
        """``(T1*, T2*)`` is ``1/conj(q)``-commuting."""
        return QPair(adj(self.T1), adj(self.T2), 1.0 / np.conj(self.q), self.scale)


@dataclass(frozen=True)
class Residual:
    """One evaluated identity.

    ``kind="norm"`` residuals are ``|achieved - target|`` and pass against the
    relative bound ``residual_tol * (1 + target)``.
    """

    label: str
    value: float
    window: str = "full"
    kind: str = "identity"
    target: float = 0.0

    def passes(self, tol: Tolerances) -> bool:
        bound = tol.residual_tol * (1.0 + self.target) if self.kind == "norm" else tol.residual_tol
        return bool(self.value <= bound)


# construction name -> residual evaluator(op, context)
RESIDUALS: dict[str, Callable[[np.ndarray, dict], list[Residual]]] = {}


def register(name: str):
    def deco(fn):
        RESIDUALS[name] = fn
        return fn
    return deco


@dataclass(frozen=True, eq=False)
class LiftResult:
    construction: str
    op: np.ndarray
    domain_chain: ChainSpace | None
    codomain_chain: ChainSpace | None
    residuals: list[Residual]
    norm_claim: tuple[float, float]
    context: dict = field(default_factory=dict, repr=False)
    meta: dict = field(default_factory=dict)

    @property
    def certificate(self) -> dict[str, float]:
        return {r.label: r.value for r in self.residuals}

    def residual(self, label: str) -> float:
        return self.certificate[label]

    def passes(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return all(r.passes(tol) for r in self.residuals)

    def failing(self, tol: Tolerances = DEFAULT_TOL) -> list[Residual]:
        return [r for r in self.residuals if not r.passes(tol)]


def make_result(construction: str, op: np.ndarray, context: dict,
                domain_chain=None, codomain_chain=None, meta=None) -> LiftResult:
    residuals = RESIDUALS[construction](op, context)
    target = context.get("norm_target", 0.0)
    return LiftResult(construction, op, domain_chain, codomain_chain, residuals,
                      (operator_norm(op), float(target)), context, dict(meta or {}))


# --------------------------------------------------------------------------
# one-step lift: Y = [[T2, 0], [A, B]] with Y V = V' Y
# --------------------------------------------------------------------------

def _qpart_blocks(T, Tp, S, Sp, T2, tol: Tolerances):
    """Solve ``A T + B S = S' T2`` with ``||[[T2, 0], [A, B]]|| = ||T2||``."""
    scale = operator_norm(T2)
    rows, cols = Sp.shape[0], S.shape[0]
    if scale == 0.0:
        return (np.zeros((rows, T2.shape[1]), dtype=np.complex128),
                np.zeros((rows, cols), dtype=np.complex128))
    X = T2 / scale
    DX = defect(X, "right", tol)
    # T* D_X K* + S* B* = X* S'*
    Kh, Bh = two_term_douglas(adj(X) @ adj(Sp), adj(T) @ DX, adj(S), tol)
    A = adj(Kh) @ DX
    return scale * A, scale * adj(Bh)


def _check_column_isometry(T, S, tol, name):
    r = operator_norm(adj(T) @ T + adj(S) @ S - np.eye(T.shape[1]))
    if r > tol.residual_tol:
        raise HypothesisViolated(f"{name}: residual {r:.3e}", hypothesis=name)


@register("qpart_step")
def _qpart_residuals(Y, ctx):
    V, Vp, T2 = ctx["V"], ctx["Vp"], ctx["T2"]
    return [
        Residual("Y V = V' Y", operator_norm(Y @ V - Vp @ Y)),
        Residual("||Y|| = ||T2||", abs(operator_norm(Y) - operator_norm(T2)), kind="norm",
                 target=operator_norm(T2)),
        Residual("Y_11 = T2", operator_norm(Y[:T2.shape[0], :T2.shape[1]] - T2), "subspace"),
    ]


def qpart_step(T, Tp, S, Sp, T2, tol: Tolerances = DEFAULT_TOL) -> LiftResult:
    """Extend ``T2`` (with ``T2 T = T' T2``) to ``Y = [[T2, 0], [A, B]]``.

    ``V = [[T, 0], [S, 0]]`` and ``V' = [[T', 0], [S', 0]]`` must have
    isometric first columns; then ``Y V = V' Y`` and ``||Y|| = ||T2||``.
    """
    T, Tp, S, Sp, T2 = (as_matrix(M, n) for M, n in
                        ((T, "T"), (Tp, "Tp"), (S, "S"), (Sp, "Sp"), (T2, "T2")))
    if T2.shape != (Tp.shape[0], T.shape[0]) or S.shape[1] != T.shape[1] \
            or Sp.shape[1] != Tp.shape[1]:
        raise DimensionMismatch("inconsistent block sizes")
    for M, n in ((T, "T"), (Tp, "T'")):
        if operator_norm(M) > 1.0 + tol.psd_tol:
            raise HypothesisViolated(f"{n} is not a contraction", hypothesis=f"||{n}|| <= 1")
    _check_column_isometry(T, S, tol, "T*T + S*S = I")
    _check_column_isometry(Tp, Sp, tol, "T'*T' + S'*S' = I")
    r = operator_norm(T2 @ T - Tp @ T2)
    if r > tol.residual_tol * (1.0 + operator_norm(T2)):
        raise HypothesisViolated(f"T2 T != T' T2 (residual {r:.3e})", hypothesis="T2 T = T' T2")
    A, B = _qpart_blocks(T, Tp, S, Sp, T2, tol)
    Y = np.block([[T2, np.zeros((T2.shape[0], S.shape[0]), dtype=np.complex128)], [A, B]])
    V = np.block([[T, np.zeros((T.shape[0], S.shape[0]))], [S, np.zeros((S.shape[0],) * 2)]])
    Vp = np.block([[Tp, np.zeros((Tp.shape[0], Sp.shape[0]))],
                   [Sp, np.zeros((Sp.shape[0],) * 2)]])
    ctx = {"V": V, "Vp": Vp, "T2": T2, "norm_target": operator_norm(T2)}
    return make_result("qpart_step", Y, ctx)


def isometric_chain(V: np.ndarray, R: np.ndarray, X: np.ndarray, d: int, levels: int,
                    tol: Tolerances) -> np.ndarray:
    """Level-by-level solution of ``V W = W R`` with ``W = [[X, 0], [*, *]]``.

    ``V`` and ``R`` are truncated Schaeffer matrices with base size ``d``;
    level ``n`` appends one block row and column via the one-step lift.
    """
    W = X.copy()
    for n in range(levels):
        cur = slice(0, d * (n + 1))
        new = slice(d * (n + 1), d * (n + 2))
        A, B = _qpart_blocks(R[cur, cur], V[cur, cur], R[new, cur], V[new, cur], W, tol)
        W = np.block([[W, np.zeros((W.shape[0], d), dtype=np.complex128)], [A, B]])
    return W


# --------------------------------------------------------------------------
# co-extension chain: Y with V Y = Y R, extended level by level via dual Parrott
# --------------------------------------------------------------------------

def coext_chain(V: np.ndarray, R: np.ndarray, X: np.ndarray,
                dom_levels: Sequence[np.ndarray], cod_levels: Sequence[np.ndarray],
                tol: Tolerances) -> tuple[np.ndarray, list[float]]:
    """Build ``Y`` with ``V Y = Y R`` and ``Y|_{K_0} = X``.

    ``dom_levels[n]`` / ``cod_levels[n]`` are the (nested, prefix) coordinate
    sets of the chains ``K_n`` and ``K'_n``.  ``V`` and ``R`` must be
    co-isometric on the chains in the sense that ``V*`` maps ``K'_{n-1}``
    isometrically into ``K'_n`` and ``R*`` maps ``K_{n-1}`` into ``K_n``.
    Returns ``Y`` and the per-level compatibility residuals.
    """
    Y = np.zeros((V.shape[0], R.shape[0]), dtype=np.complex128)
    Y[np.ix_(cod_levels[0], dom_levels[0])] = X
    compat = []
    Vh, Rh = adj(V), adj(R)
    for n in range(1, len(dom_levels)):
        dp, dn = dom_levels[n - 1], dom_levels[n]
        cp, cn = cod_levels[n - 1], cod_levels[n]
        Yprev = Y[np.ix_(cp, dp)]
        Xmap = np.zeros((len(cn), len(dp)), dtype=np.complex128)
        Xmap[:len(cp)] = Yprev
        Qp = Vh[np.ix_(cn, cp)]
        Xp = Rh[np.ix_(dn, dp)] @ adj(Yprev)
        prob = DualParrottProblem(len(dn), len(cn), Subspace.coordinate(len(dn), range(len(dp))),
                                  Subspace(len(cn), Qp), Xmap, Xp)
        ext = dual_parrott_extend(prob, tol)
        compat.append(ext.compatibility_residual)
        Y[np.ix_(cn, dn)] = ext.op
    return Y, compat


def coext_chain_residuals(Y, V, R, X, dom_levels, cod_levels, relation: str,
                          base_label: str) -> list[Residual]:
    """Every identity the co-extension engine guarantees, re-evaluated from ``Y``."""
    out = []
    d0, c0 = dom_levels[0], cod_levels[0]
    base_img = np.zeros((Y.shape[0], len(d0)), dtype=np.complex128)
    base_img[c0] = X
    out.append(Residual(base_label, operator_norm(Y[:, d0] - base_img), "subspace"))
    target = operator_norm(X)
    nd, nc = R.shape[0], V.shape[0]

    def proj(n_dim, idx):
        P = np.zeros((n_dim, n_dim), dtype=np.complex128)
        P[idx, idx] = 1.0
        return P

    def level_op(n):
        Z = np.zeros_like(Y)
        Z[np.ix_(cod_levels[n], dom_levels[n])] = Y[np.ix_(cod_levels[n], dom_levels[n])]
        return Z

    L = len(dom_levels) - 1
    prev_norm = target
    for n in range(1, L + 1):
        Yn, Yp = level_op(n), level_op(n - 1)
        Pn, Pp = proj(nc, cod_levels[n]), proj(nc, cod_levels[n - 1])
        lhs = adj(Yn) @ Pn @ adj(V)
        rhs = adj(R) @ adj(Yp) @ Pp
        out.append(Residual(f"level {n}: Y_n* P'_n V* = R* Y_(n-1)* P'_(n-1)",
                            operator_norm(lhs - rhs), "level"))
        cp, dp = cod_levels[n - 1], dom_levels[n - 1]
        claim = V[cp] @ Y[:, dp] - Y[np.ix_(cp, dp)] @ R[np.ix_(dp, dp)]
        out.append(Residual(f"level {n}: compatibility claim", operator_norm(claim), "level"))
        nrm = operator_norm(Yn)
        out.append(Residual(f"level {n}: ||Y_n|| = ||X||", abs(nrm - target), "level",
                            kind="norm", target=target))
        out.append(Residual(f"level {n}: ||Y_n|| <= ||Y_(n-1)||", max(0.0, nrm - prev_norm),
                            "level"))
        prev_norm = nrm
    gap = V @ Y - Y @ R
    if L >= 1:
        out.append(Residual(f"{relation} (interior)",
                            operator_norm(gap @ proj(nd, dom_levels[L - 1])), "interior"))
    out.append(Residual(relation, operator_norm(gap), "full"))
    out.append(Residual("||Y|| = ||X||", abs(operator_norm(Y) - target), "full",
                        kind="norm", target=target))
    return out
