"""q-commutant lifts to co-isometric extensions, built level by level."""
from __future__ import annotations

import numpy as np

from ..dilation import coisometric_extension, q_scaled_coextension, schaeffer_isometric
from ..errors import HypothesisViolated, NotContraction, QOutOfRange
from ..linalg import DEFAULT_TOL, Tolerances, adj, as_matrix, operator_norm
from .core import (Q_BOUND, LiftResult, QPair, Residual, coext_chain, coext_chain_residuals,
                   make_result, register)

__all__ = ["coiso_lift_q", "qcommutant_lift", "adjoint_lift_q"]


def _levels(chain, N):
    return [chain.upto(n) for n in range(N + 1)]


def _zero_short_circuit(V, R):
    return np.zeros((V.shape[0], R.shape[0]), dtype=np.complex128), []


@register("coiso_lift_q")
def _coiso_residuals(Y, ctx):
    return coext_chain_residuals(Y, ctx["V"], ctx["R"], ctx["X"], ctx["dom_levels"],
                                 ctx["cod_levels"], "V Y = q Y V_q", "Y|_H = X")


def coiso_lift_q(p: QPair, N: int, tol: Tolerances = DEFAULT_TOL) -> LiftResult:
    """Lift ``X = T2`` to ``Y`` with ``V Y = q Y V_q`` and ``Y|_H = X``.

    ``V`` and ``q V_q`` are the truncated co-isometric extensions of ``T1`` and
    ``q T1``.  Each level is one dual Parrott extension; the certificate holds
    the per-level shift identity, the compatibility pairing checked before each
    extension, and the per-level norms.
    """
    p.validate(tol, "dilation")
    Vb = coisometric_extension(p.T1, N, tol)
    Rb = q_scaled_coextension(p.T1, p.q, N, tol)
    dom, cod = _levels(Rb.chain, N), _levels(Vb.chain, N)
    if operator_norm(p.T2) == 0.0:
        Y, compat = _zero_short_circuit(Vb.op, Rb.op)
    else:
        Y, compat = coext_chain(Vb.op, Rb.op, p.T2, dom, cod, tol)
    ctx = {"V": Vb.op, "R": Rb.op, "X": p.T2, "q": p.q, "dom_levels": dom, "cod_levels": cod,
           "norm_target": operator_norm(p.T2)}
    return make_result("coiso_lift_q", Y, ctx, Rb.chain, Vb.chain,
                       {"levels": N, "compatibility": compat})


@register("qcommutant_lift")
def _qcommutant_residuals(S, ctx):
    return coext_chain_residuals(S, ctx["V"], ctx["R"], ctx["X"], ctx["dom_levels"],
                                 ctx["cod_levels"], "V S = q S V", "S|_H = T2")


def qcommutant_lift(p: QPair, N: int, tol: Tolerances = DEFAULT_TOL) -> LiftResult:
    """Lift ``T2`` to ``S`` on the co-isometric extension ``V`` of ``T1`` with
    ``V S = q S V``, for ``0 < |q| <= 1``."""
    p.validate(tol, "disk")
    Vb = coisometric_extension(p.T1, N, tol)
    R = p.q * Vb.op
    levels = _levels(Vb.chain, N)
    if operator_norm(p.T2) == 0.0:
        S, compat = _zero_short_circuit(Vb.op, R)
    else:
        S, compat = coext_chain(Vb.op, R, p.T2, levels, levels, tol)
    ctx = {"V": Vb.op, "R": R, "X": p.T2, "q": p.q, "dom_levels": levels,
           "cod_levels": levels, "norm_target": operator_norm(p.T2)}
    return make_result("qcommutant_lift", S, ctx, Vb.chain, Vb.chain,
                       {"levels": N, "compatibility": compat})


@register("adjoint_lift_q")
def _adjoint_residuals(Y, ctx):
    inner = coext_chain_residuals(adj(Y), ctx["Vs"], ctx["Rs"], ctx["Xs"], ctx["dom_levels"],
                                  ctx["cod_levels"], "V* Y* = conj(q) Y* V_q*", "Y*|_H = X*")
    V, R, X = adj(ctx["Vs"]), adj(ctx["Rs"]), adj(ctx["Xs"])
    gap = Y @ V - R @ Y
    d = X.shape[0]
    head = np.zeros((Y.shape[1], d), dtype=np.complex128)
    head[:d] = adj(X)
    return inner + [
        Residual("Y V = q V_q Y", operator_norm(gap), "full"),
        Residual("Y*(H) in H, Y*|_H = X*", operator_norm(adj(Y)[:, :d] - head), "subspace"),
    ]


def adjoint_lift_q(T, X, q: complex, N: int, tol: Tolerances = DEFAULT_TOL) -> LiftResult:
    """For ``q T X = X T``, lift ``X`` to ``Y`` with ``Y V = q V_q Y``.

    ``V`` and ``q V_q`` are the Schaeffer isometric dilations of ``T`` and
    ``q T``.  Reduces to ``coiso_lift_q`` on ``(T*, X*, conj(q))``, since
    ``conj(q) X* T* = T* X*``, and returns the adjoint.
    """
    T = as_matrix(T, "T")
    X = as_matrix(X, "X")
    q = complex(q)
    if q == 0:
        raise QOutOfRange("q must be nonzero", hypothesis="q != 0")
    nT = operator_norm(T)
    if nT > 1.0 + tol.psd_tol:
        raise NotContraction(f"||T|| = {nT:.12g} > 1", hypothesis="||T|| <= 1")
    if abs(q) * nT > 1.0 + tol.psd_tol:
        raise QOutOfRange(f"|q| * ||T|| = {abs(q) * nT:.12g} > 1; requires {Q_BOUND}",
                          hypothesis=Q_BOUND)
    res = operator_norm(q * T @ X - X @ T) / (1.0 + nT * operator_norm(X))
    if res > tol.residual_tol:
        raise HypothesisViolated(f"q T X != X T (residual {res:.3e})", hypothesis="q T X = X T")
    star = QPair(adj(T), adj(X), np.conj(q))
    inner = coiso_lift_q(star, N, tol)
    Y = adj(inner.op)
    ctx = {"Vs": inner.context["V"], "Rs": inner.context["R"], "Xs": adj(X),
           "dom_levels": inner.context["dom_levels"], "cod_levels": inner.context["cod_levels"],
           "norm_target": operator_norm(X)}
    Vb = schaeffer_isometric(T, N, tol)
    Rb = schaeffer_isometric(q * T, N, tol)
    return make_result("adjoint_lift_q", Y, ctx, Vb.chain, Rb.chain,
                       {"levels": N, "compatibility": inner.meta["compatibility"]})
