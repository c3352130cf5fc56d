"""Explicit q-commuting co-isometric extensions and their padding by direct sums.

Both constructions conjugate a co-isometric extension by the (invertible)
defect ``D`` of a strictly contractive lift, ``E = D^-1 V D``, and place ``E``
on the diagonal of ``M`` further copies of the lift space.  On truncated
chains ``V V* = I`` fails on the last chain block, and conjugation by the
dense ``D^-1`` spreads that failure over ``E E* - I``; the certificate reports
it on the interior window together with a per-level profile.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..dilation import ChainSpace, DilationBundle, coisometric_extension
from ..errors import (DimensionMismatch, HypothesisViolated, IllConditionedDefect,
                      NotCoisometric, NotContraction, NotStrictContraction, QNotUnimodular)
from ..linalg import DEFAULT_TOL, Tolerances, adj, as_matrix, block_diag, defect, operator_norm
from .coisometric import coiso_lift_q, qcommutant_lift
from .core import QPair, Residual, register, RESIDUALS

__all__ = ["CoextensionTriple", "IntertwiningCoextension", "q_coextension",
           "q_intertwining_coextension", "pad_coextension"]


def _interior_rows(block: int, chain_block: int, copies: int) -> np.ndarray:
    """Rows off the truncation boundary of ``copies + 1`` stacked chain spaces.

    Within each copy the last chain block (size ``chain_block``) is boundary,
    and the whole last copy is boundary.
    """
    keep = np.ones(block * (copies + 1), dtype=bool)
    for m in range(copies + 1):
        keep[(m + 1) * block - chain_block:(m + 1) * block] = False
    keep[copies * block:] = False
    return keep


def _coisometry_defect(op: np.ndarray, rows: np.ndarray) -> float:
    if not rows.any():
        return 0.0
    G = op[rows] @ adj(op[rows]) - np.eye(int(rows.sum()))
    return operator_norm(G)


def _restriction(op: np.ndarray, T: np.ndarray) -> float:
    d = T.shape[0]
    target = np.zeros((op.shape[0], d), dtype=np.complex128)
    target[:d] = T
    return operator_norm(op[:, :d] - target)


def _level_profile(G: np.ndarray, chain_block: int) -> list[float]:
    n = G.shape[0] // chain_block
    return [operator_norm(G[k * chain_block:(k + 1) * chain_block]) for k in range(n)]


@dataclass(frozen=True, eq=False)
class CoextensionTriple:
    """``X1, X2`` and ``qX_q`` on one truncated space, with ``X1 X2 = X2 (qX_q)``.

    ``interior`` marks rows off the truncation boundary; ``base_dim`` is the
    size of the embedded ``H`` (the leading coordinates).
    """

    x1: np.ndarray
    x2: np.ndarray
    xq: np.ndarray
    T1: np.ndarray
    T2: np.ndarray
    q: complex
    interior: np.ndarray
    residuals: list[Residual]
    construction: str = "q_coextension"
    context: dict = field(default_factory=dict, repr=False)
    meta: dict = field(default_factory=dict)

    @property
    def base_dim(self) -> int:
        return self.T1.shape[0]

    @property
    def op(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.x1, self.x2, self.xq

    @property
    def certificate(self) -> dict[str, float]:
        return {r.label: r.value for r in self.residuals}

    def passes(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return all(r.passes(tol) for r in self.residuals)

    def failing(self, tol: Tolerances = DEFAULT_TOL) -> list[Residual]:
        return [r for r in self.residuals if not r.passes(tol)]

    def bundle(self, which: str = "x1") -> DilationBundle:
        """One member as a co-isometric bundle whose chain blocks are the copies.

        Only meaningful before padding (the copies must tile the space).
        """
        op = {"x1": self.x1, "x2": self.x2, "xq": self.xq}[which]
        source = {"x1": self.T1, "x2": self.T2, "xq": self.q * self.T1}[which]
        copies = self.meta["copies"]
        n = op.shape[0] // (copies + 1)
        if n * (copies + 1) != op.shape[0]:
            raise DimensionMismatch("padded triples do not tile into equal copies")
        return DilationBundle(op, ChainSpace(n, n, copies), "co-isometric", source)


@register("q_coextension")
def _triple_residuals(ops, ctx) -> list[Residual]:
    x1, x2, xq = ops
    rows = ctx["interior"]
    T1, T2, q = ctx["T1"], ctx["T2"], ctx["q"]
    gap = x1 @ x2 - x2 @ xq
    out = [
        Residual("X1|_H = T1", _restriction(x1, T1), "subspace"),
        Residual("X2|_H = T2", _restriction(x2, T2), "subspace"),
        Residual("qX_q|_H = q T1", _restriction(xq, q * T1), "subspace"),
        Residual("X1 X2 = q X2 X_q (interior)", operator_norm(gap[rows]) if rows.any() else 0.0,
                 "interior"),
        Residual("X1 X2 = q X2 X_q", operator_norm(gap), "full"),
        Residual("X1 X1* = I (interior)", _coisometry_defect(x1, rows), "interior"),
        Residual("X2 X2* = I (interior)", _coisometry_defect(x2, rows), "interior"),
        Residual("qX_q (qX_q)* = I (interior)", _coisometry_defect(xq, rows), "interior"),
    ]
    if "E" in ctx:
        E, erows = ctx["E"], ctx["E_interior"]
        out.append(Residual("E E* = I (interior)", _coisometry_defect(E, erows), "interior"))
        out.append(Residual("V X = q X V_q", operator_norm(ctx["V"] @ ctx["X"] - ctx["X"] @ ctx["R"]),
                            "full"))
    return out


def _strict(M: np.ndarray, margin: float, name: str) -> float:
    nrm = operator_norm(M)
    if nrm > 1.0 - margin:
        raise NotStrictContraction(f"||{name}|| = {nrm:.12g} exceeds 1 - {margin:g}",
                                   hypothesis=f"||{name}|| < 1")
    return nrm


def _conjugated(V: np.ndarray, X: np.ndarray, tol: Tolerances):
    """``D``, ``E = D^-1 V D`` and ``cond(D)`` for ``D = D_{X*}``."""
    D = defect(X, "left", tol)
    cond = float(np.linalg.cond(D))
    if not np.isfinite(cond) or cond > 1.0 / tol.rank_tol:
        raise IllConditionedDefect(f"cond(D_X*) = {cond:.3e} exceeds 1/rank_tol")
    E = np.linalg.solve(D, V @ D)
    return D, E, cond


def q_coextension(p: QPair, N: int, M: int, tol: Tolerances = DEFAULT_TOL,
                  strictness_margin: float = 1e-6) -> CoextensionTriple:
    """Co-isometric extensions ``X1, X2, qX_q`` of ``T1, T2, qT1`` with ``X1 X2 = q X2 X_q``.

    ``X`` is the depth-``N`` lift of ``T2`` between the co-isometric extensions
    ``V`` of ``T1`` and ``qV_q`` of ``qT1``.  On ``M + 1`` copies of that space:
    ``X2`` is ``[[X, D], [0, shift]]``, ``X1 = V + E + ... + E`` and
    ``qX_q = qV_q + E + ... + E`` with ``D = D_{X*}`` and ``E = D^-1 V D``.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    p.validate(tol, "dilation")
    _strict(p.T2, strictness_margin, "T2")
    lift = coiso_lift_q(p, N, tol)
    X, V, R = lift.op, lift.context["V"], lift.context["R"]
    n, d = X.shape[0], p.dim
    D, E, cond = _conjugated(V, X, tol)
    Z = np.zeros((n, n), dtype=np.complex128)
    I = np.eye(n, dtype=np.complex128)
    grid = [[Z] * (M + 1) for _ in range(M + 1)]
    grid[0] = [X, D] + [Z] * (M - 1)
    for k in range(1, M):
        grid[k] = [Z] * (k + 1) + [I] + [Z] * (M - k - 1)
    x2 = np.block(grid)
    x1 = block_diag(V, *([E] * M))
    xq = block_diag(R, *([E] * M))
    rows = _interior_rows(n, d, M)
    erows = np.ones(n, dtype=bool)
    erows[n - d:] = False
    ctx = {"interior": rows, "T1": p.T1, "T2": p.T2, "q": p.q, "E": E, "E_interior": erows,
           "V": V, "R": R, "X": X}
    G = E @ adj(E) - I
    meta = {"levels": N, "copies": M, "cond_D": cond, "lift_passes": lift.passes(tol),
            "E_defect_by_level": _level_profile(G[:, erows], d)}
    return CoextensionTriple(x1, x2, xq, p.T1, p.T2, p.q, rows,
                             _triple_residuals((x1, x2, xq), ctx), "q_coextension", ctx, meta)


@dataclass(frozen=True, eq=False)
class IntertwiningCoextension:
    """``Y`` from ``L1 + L2^M`` to ``L2 + L2^M`` with ``Y X1 = q X2 Y``."""

    y: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    B: np.ndarray
    A: np.ndarray
    T1: np.ndarray
    T2: np.ndarray
    q: complex
    residuals: list[Residual]
    construction: str = "q_intertwining_coextension"
    context: dict = field(default_factory=dict, repr=False)
    meta: dict = field(default_factory=dict)

    @property
    def op(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.y, self.x1, self.x2

    @property
    def certificate(self) -> dict[str, float]:
        return {r.label: r.value for r in self.residuals}

    def passes(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return all(r.passes(tol) for r in self.residuals)

    def failing(self, tol: Tolerances = DEFAULT_TOL) -> list[Residual]:
        return [r for r in self.residuals if not r.passes(tol)]


@register("q_intertwining_coextension")
def _intertwining_residuals(ops, ctx) -> list[Residual]:
    y, x1, x2 = ops
    q, A, T1, T2 = ctx["q"], ctx["A"], ctx["T1"], ctx["T2"]
    r1, r2 = ctx["rows1"], ctx["rows2"]
    gap = y @ x1 - q * x2 @ y
    d1, d2 = T1.shape[0], T2.shape[0]
    head = np.zeros((y.shape[0], d1), dtype=np.complex128)
    head[:d2] = A
    return [
        Residual("Y X1 = q X2 Y (interior)", operator_norm(gap[r2]) if r2.any() else 0.0,
                 "interior"),
        Residual("Y X1 = q X2 Y", operator_norm(gap), "full"),
        Residual("Y|_H1 = A", operator_norm(y[:, :d1] - head), "subspace"),
        Residual("X1|_H1 = T1", _restriction(x1, T1), "subspace"),
        Residual("X2|_H2 = T2", _restriction(x2, T2), "subspace"),
        Residual("B V1 = q V2 B", operator_norm(ctx["B"] @ ctx["V1"] - q * ctx["V2"] @ ctx["B"]),
                 "full"),
        Residual("||B|| = ||A||", abs(operator_norm(ctx["B"]) - operator_norm(A)), "full", "norm",
                 operator_norm(A)),
        Residual("Y Y* = I (interior)", _coisometry_defect(y, r2), "interior"),
        Residual("X1 X1* = I (interior)", _coisometry_defect(x1, r1), "interior"),
        Residual("X2 X2* = I (interior)", _coisometry_defect(x2, r2), "interior"),
    ]


def q_intertwining_coextension(A, T1, T2, q: complex, N: int, M: int,
                               tol: Tolerances = DEFAULT_TOL,
                               strictness_margin: float = 1e-6) -> IntertwiningCoextension:
    """Co-isometric extensions ``Y`` of ``A`` and ``X_i`` of ``T_i`` with ``Y X1 = q X2 Y``.

    Needs ``|q| = 1`` and ``A T1 = q T2 A``.  ``B`` is the ``L1 -> L2`` block of
    the q-commutant lift of ``[[0, 0], [A, 0]]`` over ``T1 + T2``; ``Y`` is
    ``[[B, D/q], [0, shift]]``, ``X1 = V1 + qE + E + ...`` and
    ``X2 = V2 + E/q + E/q + ...`` with ``D = D_{B*}``, ``E = D^-1 V2 D``.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    q = complex(q)
    if abs(abs(q) - 1.0) > tol.residual_tol:
        raise QNotUnimodular(f"|q| = {abs(q):.12g}; requires |q| = 1", hypothesis="|q| = 1")
    A, T1, T2 = as_matrix(A, "A"), as_matrix(T1, "T1"), as_matrix(T2, "T2")
    d1, d2 = T1.shape[0], T2.shape[0]
    if T1.shape != (d1, d1) or T2.shape != (d2, d2) or A.shape != (d2, d1):
        raise DimensionMismatch("need T1: H1 -> H1, T2: H2 -> H2, A: H1 -> H2")
    for T, name in ((T1, "T1"), (T2, "T2")):
        if operator_norm(T) > 1.0 + tol.psd_tol:
            raise NotContraction(f"||{name}|| > 1", hypothesis=f"||{name}|| <= 1")
    _strict(A, strictness_margin, "A")
    res = operator_norm(A @ T1 - q * T2 @ A) / (1.0 + operator_norm(A) * max(
        operator_norm(T1), operator_norm(T2)))
    if res > tol.residual_tol:
        raise HypothesisViolated(f"A T1 != q T2 A (residual {res:.3e})", hypothesis="A T1 = q T2 A")

    # lift over T1 + T2: chain coordinates are [H1, H2] per level
    Tt = block_diag(T1, T2)
    At = np.zeros_like(Tt)
    At[d1:, :d1] = A
    lift = qcommutant_lift(QPair(Tt, At, 1.0 / q), N, tol)
    s = d1 + d2
    idx1 = np.concatenate([np.arange(k * s, k * s + d1) for k in range(N + 1)])
    idx2 = np.concatenate([np.arange(k * s + d1, (k + 1) * s) for k in range(N + 1)])
    B = lift.op[np.ix_(idx2, idx1)]
    V1 = coisometric_extension(T1, N, tol).op
    V2 = coisometric_extension(T2, N, tol).op
    n1, n2 = V1.shape[0], V2.shape[0]
    D, E, cond = _conjugated(V2, B, tol)

    Z = np.zeros((n2, n2), dtype=np.complex128)
    I = np.eye(n2, dtype=np.complex128)
    top = [B, D / q] + [np.zeros((n2, n2), dtype=np.complex128)] * (M - 1)
    rows = [top]
    for k in range(1, M + 1):
        row = [np.zeros((n2, n1), dtype=np.complex128)] + [Z] * M
        if k < M:
            row[k + 1] = I
        rows.append(row)
    y = np.block(rows)
    x1 = block_diag(V1, q * E, *([E] * (M - 1)))
    x2 = block_diag(V2, *([E / q] * M))
    rows1 = np.concatenate([np.arange(n1) < n1 - d1, _interior_rows(n2, d2, M)[n2:]])
    rows2 = _interior_rows(n2, d2, M)
    ctx = {"q": q, "A": A, "T1": T1, "T2": T2, "B": B, "V1": V1, "V2": V2,
           "rows1": rows1, "rows2": rows2}
    meta = {"levels": N, "copies": M, "cond_D": cond, "lift_passes": lift.passes(tol)}
    return IntertwiningCoextension(y, x1, x2, B, A, T1, T2, q,
                                   _intertwining_residuals((y, x1, x2), ctx),
                                   "q_intertwining_coextension", ctx, meta)


def _summand(extra, tol: Tolerances) -> tuple[np.ndarray, np.ndarray]:
    """Operator and interior-row mask of a padding summand."""
    if isinstance(extra, DilationBundle):
        if extra.kind == "isometric":
            raise NotCoisometric("padding summands must be co-isometric",
                                 hypothesis="extra summand is co-isometric")
        rows, _ = extra.boundary()
        op, keep = extra.op, ~rows
    else:
        op = as_matrix(extra, "extra")
        if op.shape[0] != op.shape[1]:
            raise DimensionMismatch("padding summands must be square")
        keep = np.ones(op.shape[0], dtype=bool)
    if _coisometry_defect(op, keep) > tol.residual_tol:
        raise NotCoisometric("padding summand is not co-isometric off its boundary",
                             hypothesis="extra summand is co-isometric")
    return op, keep


def pad_coextension(base: CoextensionTriple, extra, tol: Tolerances = DEFAULT_TOL
                    ) -> CoextensionTriple:
    """Enlarge a triple by co-isometric direct summands.

    A single summand ``Y2`` gives ``X2 + Y2``, ``X1 + I``, ``qX_q + I``.  A pair
    ``(Y1, Y2)`` gives ``X2 + I + I``, ``X1 + Y1 + Y2``, ``qX_q + Y1 + Y2``.
    Zero-dimensional summands leave the triple unchanged.
    """
    pair = isinstance(extra, (tuple, list))
    parts = [_summand(e, tol) for e in (extra if pair else [extra])]
    if pair and len(parts) != 2:
        raise ValueError("pass one summand or a pair of summands")
    ops = [op for op, _ in parts]
    eyes = [np.eye(op.shape[0], dtype=np.complex128) for op in ops]
    if pair:
        x1 = block_diag(base.x1, *ops)
        x2 = block_diag(base.x2, *eyes)
        xq = block_diag(base.xq, *ops)
    else:
        x1 = block_diag(base.x1, *eyes)
        x2 = block_diag(base.x2, *ops)
        xq = block_diag(base.xq, *eyes)
    rows = np.concatenate([base.interior] + [keep for _, keep in parts])
    ctx = {k: v for k, v in base.context.items()}
    ctx["interior"] = rows
    residuals = RESIDUALS["q_coextension"]((x1, x2, xq), ctx)
    meta = dict(base.meta)
    meta["padding"] = [op.shape[0] for op in ops]
    return CoextensionTriple(x1, x2, xq, base.T1, base.T2, base.q, rows, residuals,
                             "q_coextension", ctx, meta)
