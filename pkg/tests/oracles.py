"""Reference computations that share no code path with the library."""
from __future__ import annotations

import itertools

import numpy as np


def power_norm(M, iters: int = 2000, seed: int = 0) -> float:
    """Largest singular value by power iteration on ``M* M``."""
    M = np.asarray(M, dtype=np.complex128)
    if M.size == 0 or not np.any(M):
        return 0.0
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(M.shape[1]) + 1j * rng.standard_normal(M.shape[1])
    x /= np.linalg.norm(x)
    G = M.conj().T @ M
    lam = 0.0
    for _ in range(iters):
        y = G @ x
        ny = np.linalg.norm(y)
        if ny == 0:
            return 0.0
        x = y / ny
        new = float(np.real(x.conj() @ G @ x))
        if abs(new - lam) <= 1e-15 * max(new, 1.0):
            lam = new
            break
        lam = new
    return float(np.sqrt(max(lam, 0.0)))


def eig_sqrt(P) -> np.ndarray:
    """Hermitian square root through ``eigh`` with negative eigenvalues clipped."""
    w, U = np.linalg.eigh((P + P.conj().T) / 2)
    return (U * np.sqrt(np.clip(w, 0, None))) @ U.conj().T


def eigen_pair_count(lams, q, tol: float = 1e-9) -> int:
    """``#{(i, j) : lam_i = q lam_j}`` by exhaustive comparison."""
    return sum(1 for a, b in itertools.product(lams, repeat=2) if abs(a - q * b) <= tol)


def grid_parrott(a: complex, b: complex, c: complex, points: int = 400) -> float:
    """Minimum of ``||[[a, b], [c, d]]||`` over a square grid of ``d`` values.

    The optimum satisfies ``|d| <= mu``, so the grid covers ``[-mu, mu]^2``.
    The 2x2 norm uses the closed form for the largest singular value.
    """
    mu = max(np.hypot(abs(a), abs(c)), np.hypot(abs(a), abs(b)))
    xs = np.linspace(-mu, mu, points)
    D = xs[:, None] + 1j * xs[None, :]
    fro2 = abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 + np.abs(D) ** 2
    det = np.abs(a * D - b * c)
    smax = np.sqrt((fro2 + np.sqrt(np.maximum(fro2 ** 2 - 4 * det ** 2, 0))) / 2)
    return float(smax.min())


def orbit_closure(V, idx, n: int) -> np.ndarray:
    """Span of all words in ``V, V*`` of length ``<= n`` applied to coordinate vectors."""
    V = np.asarray(V, dtype=np.complex128)
    E = np.eye(V.shape[0], dtype=np.complex128)[:, list(idx)]
    vecs = [E]
    frontier = [E]
    for _ in range(n):
        frontier = [W for F in frontier for W in (V @ F, V.conj().T @ F)]
        vecs += frontier
    M = np.hstack(vecs)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    return U[:, s > 1e-9 * s[0]]


def same_span(A, B, tol: float = 1e-9) -> bool:
    if A.shape[1] != B.shape[1]:
        return False
    PA = A @ A.conj().T
    PB = B @ B.conj().T
    return np.linalg.norm(PA - PB, 2) <= tol


def ginibre(rng, m: int, n: int | None = None) -> np.ndarray:
    n = m if n is None else n
    return (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(2)


def contraction(rng, m: int, n: int | None = None, norm: float = 0.9) -> np.ndarray:
    G = ginibre(rng, m, n)
    return G * (norm / np.linalg.svd(G, compute_uv=False)[0])
