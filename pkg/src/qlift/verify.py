"""Certificates: re-evaluate the identities a construction claims and package them."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dilation import DilationBundle
from .errors import DimensionMismatch, LevelOutOfRange
from .lifting.core import RESIDUALS, Residual
from .linalg import DEFAULT_TOL, Tolerances, adj, as_matrix, operator_norm

__all__ = ["Check", "Certificate", "check_q_commuting", "check_dilation_identity",
           "check_lift", "purity_heuristic", "certificate_from_residuals"]

HONESTY_TOL = 1e-12


@dataclass(frozen=True)
class Check:
    label: str
    residual: float
    window: str
    passed: bool

    def to_dict(self) -> dict:
        return {"label": self.label, "residual": float(self.residual), "window": self.window,
                "pass": bool(self.passed)}


@dataclass(frozen=True)
class Certificate:
    construction: str
    checks: list[Check]
    tolerances: Tolerances = DEFAULT_TOL
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, label: str) -> Check:
        for c in self.checks:
            if c.label == label:
                return c
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {"construction": self.construction,
                "checks": [c.to_dict() for c in self.checks],
                "tolerances": self.tolerances.as_dict(),
                "metadata": _plain(self.metadata),
                "pass": self.passed}


def _plain(obj):
    """JSON-friendly copy of metadata (numpy scalars and arrays become lists/floats)."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def certificate_from_residuals(construction: str, residuals: list[Residual],
                               tol: Tolerances = DEFAULT_TOL, metadata=None) -> Certificate:
    checks = [Check(r.label, r.value, r.window, r.passes(tol)) for r in residuals]
    return Certificate(construction, checks, tol, dict(metadata or {}))


def check_q_commuting(T1, T2, q: complex, tol: Tolerances = DEFAULT_TOL) -> Certificate:
    """``||T1 T2 - q T2 T1|| / (1 + ||T1|| ||T2||)``."""
    T1, T2 = as_matrix(T1, "T1"), as_matrix(T2, "T2")
    if T1.shape[0] != T1.shape[1] or T1.shape != T2.shape:
        raise DimensionMismatch("T1 and T2 must be square of the same size")
    q = complex(q)
    r = operator_norm(T1 @ T2 - q * T2 @ T1) / (1.0 + operator_norm(T1) * operator_norm(T2))
    res = Residual("T1 T2 = q T2 T1", r, "full")
    return certificate_from_residuals("q_commuting", [res], tol, {"q": q})


def check_dilation_identity(b: DilationBundle, max_power: int | None = None,
                            tol: Tolerances = DEFAULT_TOL) -> Certificate:
    """``P_H op^k |_H = source^k`` for ``k <= max_power`` (and ``-k`` for unitary bundles)."""
    levels = b.chain.levels
    kmax = levels if max_power is None else max_power
    if not 0 <= kmax <= levels:
        raise LevelOutOfRange(f"max_power must lie in 0..{levels}, got {kmax}")
    res = b.compression_residuals(kmax)
    checks = [Residual(f"P_H op^{k}|_H = T^{k}", v, "subspace") for k, v in sorted(res.items())]
    return certificate_from_residuals(f"dilation:{b.kind}", checks, tol,
                                      {"levels": levels, "max_power": kmax})


def check_lift(r, tol: Tolerances = DEFAULT_TOL) -> Certificate:
    """Re-evaluate every identity stored on a lift or co-extension result.

    Each stored residual becomes a check that passes only if the stored value
    is honest (agrees with the recomputation to ``1e-12``) and the recomputed
    value is within tolerance.
    """
    fresh = RESIDUALS[r.construction](r.op, r.context)
    stored = {x.label: x.value for x in r.residuals}
    checks = []
    mismatch = 0.0
    for x in fresh:
        drift = abs(stored.get(x.label, np.inf) - x.value)
        mismatch = max(mismatch, drift)
        checks.append(Check(x.label, x.value, x.window, x.passes(tol) and drift <= HONESTY_TOL))
    missing = sorted(set(stored) - {x.label for x in fresh})
    for label in missing:
        checks.append(Check(label, stored[label], "full", False))
    meta = {"max_stored_drift": mismatch, **{k: v for k, v in r.meta.items()
                                             if isinstance(v, (int, float, bool, str))}}
    return Certificate(r.construction, checks, tol, meta)


def purity_heuristic(b: DilationBundle, window: int, powers: int,
                     tol: Tolerances = DEFAULT_TOL, threshold: float = 0.1) -> Certificate:
    """HEURISTIC purity indicator: decay of ``||P_W (op*)^k P_W||`` over a leading window.

    ``P_W`` projects onto ``H`` and the first ``window`` chain levels.  Passes
    when the sequence never increases and ends at or below ``threshold``.  A
    finite truncation cannot certify purity; this is an indicator only.
    """
    if not 0 <= window < max(b.chain.levels, 1):
        raise LevelOutOfRange(f"window must lie in 0..{b.chain.levels - 1}")
    idx = b.chain.upto(window)
    A = adj(b.op)
    P = np.eye(b.chain.dim, dtype=np.complex128)
    decay = []
    for _ in range(powers + 1):
        decay.append(operator_norm(P[np.ix_(idx, idx)]))
        P = P @ A
    monotone = all(decay[k + 1] <= decay[k] + tol.psd_tol for k in range(len(decay) - 1))
    ok = monotone and decay[-1] <= threshold
    check = Check("HEURISTIC: ||P_W (op*)^k P_W|| decays", decay[-1], "interior", ok)
    return Certificate("purity_heuristic", [check], tol,
                       {"heuristic": True, "decay": decay, "window": window, "powers": powers})
