import numpy as np
import pytest
from hypothesis import given, strategies as st

from qlift.errors import Incompatible, NotContraction, OrderViolated, RangeViolation
from qlift.factorization import (DualParrottProblem, douglas_solve, dual_parrott_extend,
                                 parrott_complete, triangular_complete, triangular_extract,
                                 two_term_douglas)
from qlift.linalg import Subspace, adj, operator_norm

from oracles import contraction, ginibre, grid_parrott

seeds = st.integers(0, 2**32 - 1)


@pytest.mark.parametrize("A, B, Z", [
    (np.eye(2), np.eye(2), np.eye(2)),
    (np.diag([0.5, 1 / 3]), np.diag([1.0, 0.5]), np.diag([0.5, 2 / 3])),
])
def test_douglas_examples(A, B, Z):
    np.testing.assert_allclose(douglas_solve(A, B), Z, atol=1e-14)


def test_douglas_rejects_order_violation():
    with pytest.raises(OrderViolated):
        douglas_solve([[1.0]], [[0.5]])


@given(seeds)
def test_douglas_feasible_from_known_factor(seed):
    rng = np.random.default_rng(seed)
    B = ginibre(rng, 4, 3)
    A = B @ contraction(rng, 3, 2, norm=rng.uniform(0.1, 1.0))
    Z = douglas_solve(A, B)
    assert operator_norm(B @ Z - A) <= 1e-8 * (1 + operator_norm(A))
    assert operator_norm(Z) <= 1 + 1e-8


@given(seeds)
def test_douglas_rank_deficient_b(seed):
    rng = np.random.default_rng(seed)
    B = ginibre(rng, 4, 2) @ ginibre(rng, 2, 3)
    A = B @ contraction(rng, 3, 3, norm=0.7)
    Z = douglas_solve(A, B)
    assert operator_norm(B @ Z - A) <= 1e-8 * (1 + operator_norm(A))
    assert operator_norm(Z) <= 1 + 1e-8


def test_two_term_examples():
    I, O = np.eye(2), np.zeros((2, 2))
    Z1, Z2 = two_term_douglas(I, I, O)
    np.testing.assert_allclose(Z1, I, atol=1e-14)
    np.testing.assert_allclose(Z2, O, atol=1e-14)
    Z1, Z2 = two_term_douglas(O, ginibre(np.random.default_rng(1), 2), I)
    assert operator_norm(Z1) == 0 and operator_norm(Z2) == 0


@given(seeds)
def test_two_term_from_known_solution(seed):
    rng = np.random.default_rng(seed)
    A1, A2 = ginibre(rng, 3, 2), ginibre(rng, 3, 4)
    C = contraction(rng, 6, 3, norm=0.95)
    A0 = A1 @ C[:2] + A2 @ C[2:]
    Z1, Z2 = two_term_douglas(A0, A1, A2)
    assert operator_norm(A1 @ Z1 + A2 @ Z2 - A0) <= 1e-8 * (1 + operator_norm(A0))
    assert operator_norm(adj(Z1) @ Z1 + adj(Z2) @ Z2) <= 1 + 1e-8


@pytest.mark.parametrize("b, c", [(0.3, 0.6), (0.8, 0.1), (0.0, 0.0)])
def test_parrott_zero_corner(b, c):
    D, mu = parrott_complete([[0.0]], [[b]], [[c]])
    assert abs(D[0, 0]) <= 1e-15
    assert mu == pytest.approx(max(b, c), abs=1e-15)


def test_parrott_halves():
    D, mu = parrott_complete([[0.5]], [[0.5]], [[0.5]])
    assert D[0, 0] == pytest.approx(-0.5, abs=1e-14)
    assert mu == pytest.approx(1 / np.sqrt(2), abs=1e-14)
    M = np.array([[0.5, 0.5], [0.5, D[0, 0]]])
    assert operator_norm(M) == pytest.approx(1 / np.sqrt(2), abs=1e-14)
    assert grid_parrott(0.5, 0.5, 0.5, 200) >= mu - 1e-12


def test_parrott_unit_corner_forces_zero():
    D, mu = parrott_complete([[1.0]], [[0.0]], [[0.0]])
    assert D[0, 0] == 0 and mu == 1.0


@given(seeds)
def test_parrott_attains_lower_bound_blocks(seed):
    rng = np.random.default_rng(seed)
    A, B, C = ginibre(rng, 2, 3), ginibre(rng, 2, 2), ginibre(rng, 3, 3)
    D, mu = parrott_complete(A, B, C)
    full = np.block([[A, B], [C, D]])
    assert operator_norm(full) <= mu * (1 + 1e-9)


@given(seeds)
def test_parrott_scalar_vs_grid(seed):
    rng = np.random.default_rng(seed)
    a, b, c = ginibre(rng, 3, 1)[:, 0]
    D, mu = parrott_complete([[a]], [[b]], [[c]])
    achieved = operator_norm(np.array([[a, b], [c, D[0, 0]]]))
    assert achieved <= grid_parrott(a, b, c) + 1e-6


def _dual_problem(rng, n=4, k=2, kp=2):
    Y0 = contraction(rng, n, n, norm=0.8)
    H = Subspace.span(ginibre(rng, n, k))
    Hp = Subspace.span(ginibre(rng, n, kp))
    return DualParrottProblem(n, n, H, Hp, Y0 @ H.basis, adj(Y0) @ Hp.basis), Y0


def test_dual_parrott_zero():
    H = Subspace.coordinate(2, [0])
    p = DualParrottProblem(2, 2, H, H, np.zeros((2, 1)), np.zeros((2, 1)))
    assert operator_norm(dual_parrott_extend(p).op) == 0


def test_dual_parrott_scalar_reduction():
    H = Subspace.coordinate(2, [0])
    x = np.array([[0.5], [0.5]])
    ext = dual_parrott_extend(DualParrottProblem(2, 2, H, H, x, x))
    assert ext.norm == pytest.approx(1 / np.sqrt(2), abs=1e-14)


@given(seeds)
def test_dual_parrott_extends_both_ways(seed):
    p, Y0 = _dual_problem(np.random.default_rng(seed))
    ext = dual_parrott_extend(p)
    assert ext.extension_residual <= 1e-12
    assert ext.adjoint_extension_residual <= 1e-12
    assert ext.norm <= ext.bound * (1 + 1e-8)


def test_dual_parrott_incompatible(rng):
    p, _ = _dual_problem(rng)
    bad = DualParrottProblem(4, 4, p.H, p.Hp, p.X + 0.1, p.Xp)
    with pytest.raises(Incompatible):
        dual_parrott_extend(bad)


def test_triangular_examples(rng):
    T1, T2 = contraction(rng, 2), contraction(rng, 3)
    X, Y = triangular_complete(T1, T2, np.zeros((3, 2)))
    assert operator_norm(X) == 0
    np.testing.assert_array_equal(Y[:2, 2:], 0)
    U = np.linalg.qr(ginibre(rng, 2))[0]
    X, _ = triangular_complete(U, T2, contraction(rng, 3, 2))
    assert operator_norm(X) <= 1e-14
    C = contraction(rng, 2, 2)
    X, _ = triangular_complete(np.zeros((2, 2)), np.zeros((2, 2)), C)
    np.testing.assert_allclose(X, C, atol=1e-14)


def test_triangular_rejects_large_c(rng):
    with pytest.raises(NotContraction):
        triangular_complete(np.zeros((1, 1)), np.zeros((1, 1)), [[2.0]])


def test_triangular_extract_zero_and_range(rng):
    T1, T2 = contraction(rng, 2), contraction(rng, 2)
    assert operator_norm(triangular_extract(T1, T2, np.zeros((2, 2)))) == 0
    U = np.linalg.qr(ginibre(rng, 2))[0]
    with pytest.raises(RangeViolation):
        triangular_extract(U, T2, 0.1 * np.ones((2, 2)))


@given(seeds)
def test_triangular_roundtrip(seed):
    rng = np.random.default_rng(seed)
    T1, T2 = contraction(rng, 3, norm=0.9), contraction(rng, 2, norm=0.9)
    X, Y = triangular_complete(T1, T2, contraction(rng, 2, 3, norm=0.9))
    assert operator_norm(Y) <= 1 + 1e-10
    C = triangular_extract(T1, T2, X)
    X2, _ = triangular_complete(T1, T2, C)
    assert operator_norm(X2 - X) <= 1e-8
