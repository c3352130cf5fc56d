"""q-commutant lifts to isometric and unitary dilations."""
from __future__ import annotations

import numpy as np

from ..dilation import schaeffer_isometric, unitary_dilation
from ..linalg import DEFAULT_TOL, Tolerances, adj, operator_norm
from .core import (LiftResult, QPair, Residual, coext_chain, coext_chain_residuals,
                   isometric_chain, make_result, register)

__all__ = ["isometric_lift_q", "unitary_q_lift"]


@register("isometric_lift_q")
def _isometric_residuals(W, ctx):
    V, R, T2, d = ctx["V"], ctx["R"], ctx["T2"], ctx["d"]
    levels = V.shape[0] // d - 1
    target = operator_norm(T2)
    out = []
    for n in range(1, levels + 1):
        k = d * (n + 1)
        Wn = W[:k, :k]
        out.append(Residual(f"level {n}: V_n W_n = W_n (qV_q)_n",
                            operator_norm(V[:k, :k] @ Wn - Wn @ R[:k, :k]), "level"))
    head = np.zeros((W.shape[1], d), dtype=np.complex128)
    head[:d] = adj(T2)
    out += [
        Residual("V W = q W V_q", operator_norm(V @ W - W @ R), "full"),
        Residual("||W|| = ||T2||", abs(operator_norm(W) - target), "full", "norm", target),
        Residual("W*|_H = T2*", operator_norm(adj(W)[:, :d] - head), "subspace"),
    ]
    return out


def isometric_lift_q(p: QPair, N: int, tol: Tolerances = DEFAULT_TOL) -> LiftResult:
    """Lift ``T2`` to ``W`` with ``V W = q W V_q`` between Schaeffer dilations.

    ``V`` dilates ``T1`` and ``q V_q`` dilates ``q T1``, both truncated at ``N``
    levels.  The result satisfies the intertwining exactly at level ``N``, has
    ``||W|| = ||T2||`` and ``W*`` restricts to ``T2*`` on ``H``.
    """
    p.validate(tol, "dilation")
    Vb = schaeffer_isometric(p.T1, N, tol)
    Rb = schaeffer_isometric(p.q * p.T1, N, tol)
    d = p.dim
    W = isometric_chain(Vb.op, Rb.op, p.T2, d, N, tol)
    ctx = {"V": Vb.op, "R": Rb.op, "T2": p.T2, "d": d, "q": p.q,
           "norm_target": operator_norm(p.T2)}
    return make_result("isometric_lift_q", W, ctx, Rb.chain, Vb.chain, {"levels": N})


@register("unitary_q_lift")
def _unitary_residuals(S, ctx):
    U, R, T1, T2, q, d = ctx["U"], ctx["R"], ctx["T1"], ctx["T2"], ctx["q"], ctx["d"]
    out = coext_chain_residuals(S, U, R, ctx["S_plus"], ctx["dom_levels"], ctx["cod_levels"],
                                "U S = q S U_q", "S|_K+ = S+")
    Uq = R / q
    h = slice(0, d)
    A = np.eye(S.shape[0], dtype=np.complex128)   # U_q^n, acting on K
    B = np.eye(S.shape[0], dtype=np.complex128)   # U^n, acting on K'
    T1n = np.eye(d, dtype=np.complex128)
    for n in range(ctx["levels"] + 1):
        out.append(Residual(f"T1^{n} T2 = P_H U_q^{n} S|_H",
                            operator_norm((A @ S)[h, h] - T1n @ T2), "subspace"))
        out.append(Residual(f"T2 T1^{n} = P_H S U^{n}|_H",
                            operator_norm((S @ B)[h, h] - T2 @ T1n), "subspace"))
        out.append(Residual(f"T1^{n} T2 = P_H U^{n} S|_H",
                            operator_norm((B @ S)[h, h] - T1n @ T2), "subspace"))
        A, B, T1n = A @ Uq, B @ U, T1n @ T1
    return out


def unitary_q_lift(p: QPair, N: int, tol: Tolerances = DEFAULT_TOL) -> LiftResult:
    """Lift ``T2`` to ``S`` with ``U S = q S U_q`` between unitary dilations.

    First ``T2`` is lifted between the isometric parts, then that lift is
    extended across the co-isometric (negative) levels, using that the
    two-sided dilation is a co-isometric extension of its isometric part.
    """
    p.validate(tol, "dilation")
    d = p.dim
    plus = isometric_lift_q(p, N, tol)
    Ub = unitary_dilation(p.T1, N, tol)
    Rb = unitary_dilation(p.q * p.T1, N, tol)
    dom_levels = [Rb.chain.upto_negative(n) for n in range(N + 1)]
    cod_levels = [Ub.chain.upto_negative(n) for n in range(N + 1)]
    S, compat = coext_chain(Ub.op, Rb.op, plus.op, dom_levels, cod_levels, tol)
    ctx = {"U": Ub.op, "R": Rb.op, "T1": p.T1, "T2": p.T2, "q": p.q, "d": d, "levels": N,
           "S_plus": plus.op, "dom_levels": dom_levels, "cod_levels": cod_levels,
           "norm_target": operator_norm(p.T2)}
    meta = {"levels": N, "compatibility": compat,
            "isometric_stage": {r.label: r.value for r in plus.residuals}}
    return make_result("unitary_q_lift", S, ctx, Rb.chain, Ub.chain, meta)
