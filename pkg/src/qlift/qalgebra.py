"""Generators of q-commuting test data."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import QOutOfRange
from .lifting.core import QPair
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, operator_norm, svd

__all__ = [
    "GeneratorSpec",
    "example_pair_jordan",
    "hardy_pair_truncated",
    "q_commutant_basis",
    "random_contraction",
    "random_qpair",
]

FAMILIES = ("jordan", "hardy", "random", "custom")


@dataclass(frozen=True)
class GeneratorSpec:
    family: str = "random"
    dim: int = 3
    q: complex = 1.0
    seed: int = 0
    strict: bool = False
    margin: float = 1e-2
    norm: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if complex(self.q) == 0:
            raise ValueError("q must be nonzero")
        if not 0.0 < self.margin < 1.0:
            raise ValueError("margin must lie in (0, 1)")
        if self.norm < 0:
            raise ValueError("norm must be non-negative")

    @property
    def target_norm(self) -> float:
        return min(self.norm, 1.0 - self.margin) if self.strict else min(self.norm, 1.0)


def example_pair_jordan(a: complex, b: complex, d: complex, q: complex) -> QPair:
    """``T1 = [[a, 0], [b, q a]]``, ``T2 = [[0, 0], [d, 0]]``, with ``T1`` scaled into the unit ball.

    The scale factor ``max(1, ||T1||)`` is kept on the pair; q-commutation is
    homogeneous in ``T1`` so it survives the rescaling.
    """
    q = complex(q)
    if q == 0:
        raise QOutOfRange("q must be nonzero", hypothesis="q != 0")
    T1 = np.array([[a, 0], [b, q * a]], dtype=np.complex128)
    T2 = np.array([[0, 0], [d, 0]], dtype=np.complex128)
    scale = max(1.0, operator_norm(T1))
    return QPair(T1 / scale, T2, q, scale)


def hardy_pair_truncated(q: complex, n: int) -> QPair:
    """Composition by ``z -> qz`` and multiplication by ``z`` on polynomials of degree < n.

    ``T1 = diag(1, q, ..., q^(n-1))`` and ``T2`` is the lower shift; the shift
    drops the top degree, which is harmless for ``T1 T2 = q T2 T1``.
    """
    q = complex(q)
    if q == 0 or abs(q) > 1.0:
        raise QOutOfRange(f"|q| = {abs(q):.12g}; requires 0 < |q| <= 1",
                          hypothesis="0 < |q| <= 1")
    if n < 2:
        raise ValueError("n must be >= 2")
    T1 = np.diag(q ** np.arange(n)).astype(np.complex128)
    T2 = np.diag(np.ones(n - 1), -1).astype(np.complex128)
    return QPair(T1, T2, q)


def q_commutant_basis(T, q: complex, tol: Tolerances = DEFAULT_TOL) -> list[np.ndarray]:
    """Trace-orthonormal basis of ``{X : T X = q X T}``.

    With column-stacking, ``vec(T X - q X T) = (I (x) T - q T^T (x) I) vec(X)``;
    the null space is read off the SVD with the ``rank_tol`` cutoff.
    """
    T = as_matrix(T, "T")
    q = complex(q)
    if q == 0:
        raise QOutOfRange("q must be nonzero", hypothesis="q != 0")
    n = T.shape[0]
    I = np.eye(n)
    L = np.kron(I, T) - q * np.kron(T.T, I)
    _, s, Vh = svd(L, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol.rank_tol * smax)) if smax > 0 else 0
    null = Vh[rank:].conj()
    return [v.reshape(n, n, order="F") for v in null]


def random_contraction(spec: GeneratorSpec, rng: np.random.Generator | None = None) -> np.ndarray:
    """Complex Ginibre draw rescaled to ``spec.target_norm``; seeded by ``spec.seed``."""
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    n = spec.dim
    G = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    s = operator_norm(G)
    return G * (spec.target_norm / s) if s > 0 else G


def _chain_spectrum(rng, n: int, q: complex, chains, sep: float = 0.05) -> np.ndarray:
    """Eigenvalues containing geometric runs ``lam, q lam, q^2 lam, ...``.

    ``chains`` lists the run lengths; remaining eigenvalues are free.  All
    eigenvalues are kept ``sep``-separated so ``T1`` stays diagonalizable.
    """
    if sum(chains) > n:
        raise ValueError("chain lengths exceed the dimension")
    # q near 1 squeezes each run together, so the threshold follows |1 - q|
    sep = min(sep, 0.5 * abs(1.0 - q))
    for _ in range(10_000):
        lam = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
        k = 0
        for length in chains:
            lam[k:k + length] = lam[k] * q ** np.arange(length)
            k += length
        diff = np.abs(lam[:, None] - lam[None, :]) + np.eye(n) * 10
        if diff.min() >= sep:
            return lam
    raise RuntimeError("could not draw a separated spectrum")


def random_qpair(spec: GeneratorSpec, rng: np.random.Generator | None = None,
                 t2_norm: float = 0.8, fill: float = 0.95, chains=(2,)) -> QPair:
    """Seeded q-commuting pair with a non-trivial ``T2``.

    ``T1`` is a well-conditioned similarity of a diagonal whose spectrum
    contains geometric runs ``lam, q lam, ...`` of the lengths in ``chains``;
    ``T2`` is a random combination of the q-commutant basis of ``T1``.  ``T1`` is scaled to ``fill * min(1, 1/|q|)``
    so the standing bound ``|q| ||T1|| <= 1`` holds with room to spare.
    """
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    n = spec.dim
    q = complex(spec.q)
    if n < 2:
        return QPair(random_contraction(spec, rng) * fill * min(1.0, 1.0 / abs(q)),
                     np.zeros((1, 1)), q)
    chains = [c for c in chains if c >= 2] or [2]
    if abs(q - 1.0) < 1e-3:
        chains = []  # every T1 commutes with itself; no forced runs needed
    while chains and sum(chains) > n:
        chains = chains[:-1] if len(chains) > 1 else [n]
    lam = _chain_spectrum(rng, n, q, chains)
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    S = Q @ np.diag(1.0 + 0.5 * rng.random(n))
    T1 = S @ np.diag(lam) @ np.linalg.inv(S)
    T1 *= fill * min(1.0, 1.0 / abs(q)) / operator_norm(T1)
    basis = q_commutant_basis(T1, q)
    # q-commutation of the pair (T1, T2) reads T1 T2 = q T2 T1
    T2 = sum((rng.standard_normal() + 1j * rng.standard_normal()) * B for B in basis)
    if isinstance(T2, int) or operator_norm(T2) == 0:
        T2 = np.zeros((n, n), dtype=np.complex128)
    else:
        T2 = T2 * (t2_norm / operator_norm(T2))
    return QPair(T1, T2, q)
