import numpy as np
import pytest
from hypothesis import given, strategies as st

from qlift.errors import DimensionMismatch, NotHermitian
from qlift.linalg import (DEFAULT_TOL, Subspace, Tolerances, adj, assemble_blocks, block_diag,
                          defect, extract_block, operator_norm, orth, pinv, pinv_apply, psd_leq,
                          psd_sqrt)

from oracles import contraction, eig_sqrt, ginibre, power_norm

seeds = st.integers(0, 2**32 - 1)


@pytest.mark.parametrize("M, expected", [
    (np.eye(2), 1.0),
    (np.array([[0, 0], [0.25, 0]]), 0.25),
    (np.zeros((3, 2)), 0.0),
    (np.zeros((0, 0)), 0.0),
])
def test_operator_norm_examples(M, expected):
    assert operator_norm(M) == pytest.approx(expected, abs=1e-15)


@given(seeds)
def test_operator_norm_vs_power_iteration(seed):
    M = ginibre(np.random.default_rng(seed), 5, 3)
    assert abs(operator_norm(M) - power_norm(M)) <= 1e-10


def test_as_matrix_rejects_nan():
    with pytest.raises(ValueError):
        operator_norm(np.array([[np.nan]]))


def test_tolerances_validated():
    with pytest.raises(ValueError):
        Tolerances(rank_tol=0.0)
    with pytest.raises(ValueError):
        Tolerances(residual_tol=1.5)


@pytest.mark.parametrize("P, Q", [
    (np.eye(2), np.eye(2)),
    (np.diag([4.0, 9.0]), np.diag([2.0, 3.0])),
])
def test_psd_sqrt_examples(P, Q):
    np.testing.assert_allclose(psd_sqrt(P), Q, atol=1e-14)


@given(seeds)
def test_psd_sqrt_squares_back(seed):
    A = ginibre(np.random.default_rng(seed), 4)
    P = A @ adj(A)
    Q = psd_sqrt(P)
    assert operator_norm(Q @ Q - P) <= 1e-9 * max(1.0, operator_norm(P))
    assert operator_norm(Q - eig_sqrt(P)) <= 1e-8 * max(1.0, operator_norm(Q))


@given(seeds)
def test_psd_sqrt_idempotent_on_squares(seed):
    A = ginibre(np.random.default_rng(seed), 3)
    Q = psd_sqrt(A @ adj(A))
    assert operator_norm(psd_sqrt(Q @ Q) - Q) <= 1e-8


def test_psd_sqrt_clamps_tiny_negatives():
    Q = psd_sqrt(np.diag([1.0, -1e-12]))
    np.testing.assert_allclose(Q, np.diag([1.0, 0.0]), atol=1e-15)


def test_psd_sqrt_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        psd_sqrt(np.array([[1.0, 1.0], [0.0, 1.0]]))


@pytest.mark.parametrize("T, expected", [
    (np.zeros((2, 2)), np.eye(2)),
    (np.array([[0.5]]), np.array([[np.sqrt(3) / 2]])),
    (np.eye(3)[:, :2], np.zeros((2, 2))),
])
def test_defect_examples(T, expected):
    np.testing.assert_allclose(defect(T), expected, atol=1e-15)


@given(seeds)
def test_defect_identity(seed):
    T = contraction(np.random.default_rng(seed), 4, 3, norm=1.0)
    D = defect(T, "right")
    assert operator_norm(D) <= 1 + 1e-12
    assert operator_norm(D @ D + adj(T) @ T - np.eye(3)) <= 1e-9
    Dl = defect(T, "left")
    assert operator_norm(Dl @ Dl + T @ adj(T) - np.eye(4)) <= 1e-9


@pytest.mark.parametrize("M, expected", [
    (np.eye(2), np.eye(2)),
    (np.diag([2.0, 0.0]), np.diag([0.5, 0.0])),
])
def test_pinv_examples(M, expected):
    np.testing.assert_allclose(pinv(M), expected, atol=1e-15)


def test_pinv_full_rank_is_inverse(rng):
    M = ginibre(rng, 5)
    assert operator_norm(pinv(M) - np.linalg.solve(M, np.eye(5))) <= 1e-9


def test_pinv_penrose_on_500_varied_rank(rng):
    worst = 0.0
    for _ in range(500):
        m, n = rng.integers(1, 7, size=2)
        r = rng.integers(0, min(m, n) + 1)
        M = ginibre(rng, m, r) @ ginibre(rng, r, n) if r else np.zeros((m, n))
        worst = max(worst, operator_norm(M @ pinv(M) @ M - M) / max(operator_norm(M), 1e-300))
    assert worst <= DEFAULT_TOL.residual_tol


@pytest.mark.parametrize("side", ["left", "right"])
def test_pinv_apply_matches_explicit(rng, side):
    M = ginibre(rng, 4, 3)
    R = ginibre(rng, 4, 2) if side == "left" else ginibre(rng, 2, 3)
    got = pinv_apply(M, R, side=side)
    want = pinv(M) @ R if side == "left" else R @ pinv(M)
    assert operator_norm(got - want) <= 1e-12


def test_psd_leq_examples():
    I = np.eye(2)
    assert psd_leq(np.zeros((2, 2)), I)
    assert not psd_leq(I, np.zeros((2, 2)))
    B = np.array([[1.0, 0.5], [0.2, 0.7]])
    A = B / 2
    assert psd_leq(A @ adj(A), B @ adj(B))


def test_assemble_single_block():
    M = np.arange(6.0).reshape(2, 3)
    np.testing.assert_array_equal(assemble_blocks([[M]]), M)


def test_block_diag_roundtrip_exact(rng):
    A, B = ginibre(rng, 2), ginibre(rng, 3)
    D = block_diag(A, B)
    np.testing.assert_array_equal(extract_block(D, [2, 3], [2, 3], 1, 1), B)
    np.testing.assert_array_equal(extract_block(D, [2, 3], [2, 3], 0, 1), np.zeros((2, 3)))


def test_schaeffer_grid_for_half():
    half = np.array([[0.5]])
    V = assemble_blocks([[half, None], [defect(half), None]], col_sizes=[1, 1])
    np.testing.assert_allclose(V, [[0.5, 0], [np.sqrt(3) / 2, 0]], atol=1e-15)


def test_assemble_rejects_ragged_and_bad_sizes():
    with pytest.raises(DimensionMismatch):
        assemble_blocks([[np.eye(2)], [np.eye(2), np.eye(2)]])
    with pytest.raises(DimensionMismatch):
        assemble_blocks([[np.eye(2), np.eye(3)]])
    with pytest.raises(DimensionMismatch):
        assemble_blocks([[None]])


@given(seeds)
def test_assemble_extract_roundtrip(seed):
    rng = np.random.default_rng(seed)
    rs, cs = list(rng.integers(1, 4, 2)), list(rng.integers(1, 4, 3))
    grid = [[ginibre(rng, r, c) for c in cs] for r in rs]
    M = assemble_blocks(grid)
    for i in range(2):
        for j in range(3):
            np.testing.assert_array_equal(extract_block(M, rs, cs, i, j), grid[i][j])


def test_subspace_span_and_complement(rng):
    S = Subspace.span(ginibre(rng, 5, 2))
    assert S.dim == 2 and S.orthonormality_defect() <= 1e-12
    C = S.complement()
    assert C.dim == 3
    assert operator_norm(S.projection() + C.projection() - np.eye(5)) <= 1e-12


def test_orth_drops_dependent_columns(rng):
    v = ginibre(rng, 4, 1)
    assert orth(np.hstack([v, 2 * v])).shape == (4, 1)
