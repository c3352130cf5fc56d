import numpy as np
import pytest
from hypothesis import given, strategies as st

from qlift.dilation import coisometric_extension, schaeffer_isometric
from qlift.errors import (HypothesisViolated, NotCoisometric, NotStrictContraction,
                          QNotUnimodular)
from qlift.lifting import (QPair, coiso_lift_q, pad_coextension, q_coextension,
                           q_intertwining_coextension)
from qlift.linalg import operator_norm
from qlift.qalgebra import GeneratorSpec, example_pair_jordan, random_qpair
from qlift.verify import check_lift, purity_heuristic

from oracles import contraction

seeds = st.integers(0, 2**32 - 1)
EXACT = ("X1|_H = T1", "X2|_H = T2", "qX_q|_H = q T1")


def strict_pair(seed, q, n=3, chains=(2,)):
    return random_qpair(GeneratorSpec("random", n, q, seed), t2_norm=0.9, chains=chains)


def test_zero_t2_is_pure_shift_triple(rng):
    T1 = contraction(rng, 2, norm=0.7)
    t = q_coextension(QPair(T1, np.zeros((2, 2)), 0.9), 3, 3)
    assert t.passes(), t.failing()
    assert t.meta["cond_D"] == pytest.approx(1.0)
    assert t.certificate["X1 X2 = q X2 X_q (interior)"] <= 1e-14


def test_q_one_makes_outer_operators_equal(rng):
    T1 = contraction(rng, 2, norm=0.7)
    t = q_coextension(QPair(T1, 0.5 * T1, 1.0), 3, 2)
    np.testing.assert_array_equal(t.x1, t.xq)
    assert t.certificate["X1 X2 = q X2 X_q (interior)"] <= 1e-10


@pytest.mark.parametrize("seed", range(4))
def test_zero_last_column_gives_full_certificate(seed):
    # E E* - I = D^-1 (X P X* - P) D^-1 with P the last chain block; when the last
    # block column of the (upper triangular) lift sits on the diagonal, X and D
    # split off the last block and the interior defect vanishes
    p = strict_pair(seed, 0.7)
    X = coiso_lift_q(p, 4).op
    assert operator_norm(X[:-p.dim, -p.dim:]) <= 1e-12
    t = q_coextension(p, 4, 3)
    assert t.passes(), [(r.label, r.value) for r in t.failing()]


@pytest.mark.parametrize("q", [1j, 0.5, np.exp(0.7j)])
def test_example_pair_e_defect_shrinks_with_depth(q):
    p = example_pair_jordan(1, 0.5, 0.25, q)
    first = [q_coextension(p, N, 2).meta["E_defect_by_level"][0] for N in (2, 4, 8)]
    assert first[2] < first[1] < first[0]
    t = q_coextension(p, 4, 3)
    assert max(t.certificate[k] for k in EXACT) <= 1e-12
    assert t.certificate["X1 X2 = q X2 X_q (interior)"] <= 1e-10


@given(seed=seeds, q=st.complex_numbers(min_magnitude=0.3, max_magnitude=1.5),
       N=st.integers(1, 4), M=st.integers(1, 3))
def test_exact_parts(seed, q, N, M):
    t = q_coextension(strict_pair(seed, q, chains=(2, 2), n=4), N, M)
    c = t.certificate
    assert max(c[k] for k in EXACT) <= 1e-12
    assert c["X1 X2 = q X2 X_q (interior)"] <= 1e-10
    assert c["X2 X2* = I (interior)"] <= 1e-10
    assert c["V X = q X V_q"] <= 1e-10


def test_check_lift_recomputes_triple(rng):
    p = example_pair_jordan(1, 0.5, 0.25, 1j)
    t = q_coextension(p, 3, 2)
    cert = check_lift(t)
    assert cert.metadata["max_stored_drift"] <= 1e-12


def test_strictness_gate():
    p = QPair(0.5 * np.eye(2), np.eye(2), 1.0)
    with pytest.raises(NotStrictContraction):
        q_coextension(p, 2, 2)


def test_purity_heuristic_on_coshift_member():
    p = example_pair_jordan(0.6, 0.3, 0.25, 0.5)
    t = q_coextension(p, 3, 4)
    cert = purity_heuristic(t.bundle("x2"), 0, 12)
    assert cert.checks[0].label.startswith("HEURISTIC")
    assert cert.metadata["decay"][-1] < cert.metadata["decay"][0]


# ------------------------------------------------------------------ padding

@pytest.fixture
def triple():
    return q_coextension(example_pair_jordan(1, 0.5, 0.25, 1j), 3, 2)


def test_pad_zero_dimensional(triple):
    t = pad_coextension(triple, np.zeros((0, 0)))
    for a, b in zip(t.op, triple.op):
        np.testing.assert_array_equal(a, b)
    assert t.certificate == triple.certificate


def test_pad_single_identity(triple):
    t = pad_coextension(triple, np.eye(3))
    assert t.x1.shape[0] == triple.x1.shape[0] + 3
    for k, v in triple.certificate.items():
        assert abs(t.certificate[k] - v) <= 1e-12, k


def test_pad_pair_of_bundles(triple, rng):
    Y1 = coisometric_extension(contraction(rng, 2, norm=0.5), 2)
    Y2 = coisometric_extension(contraction(rng, 2, norm=0.5), 2)
    t = pad_coextension(triple, (Y1, Y2))
    n = triple.x2.shape[0]
    np.testing.assert_array_equal(t.x2[n:, n:], np.eye(12))
    for k, v in triple.certificate.items():
        assert abs(t.certificate[k] - v) <= 1e-12, k
    assert check_lift(t).metadata["max_stored_drift"] <= 1e-12


def test_pad_rejects_non_coisometric(triple, rng):
    with pytest.raises(NotCoisometric):
        pad_coextension(triple, 0.5 * np.eye(2))
    with pytest.raises(NotCoisometric):
        pad_coextension(triple, schaeffer_isometric(contraction(rng, 2), 2))


# ------------------------------------------------------------------ intertwining

def unimodular_instance(seed):
    rng = np.random.default_rng(seed)
    q = np.exp(2j * np.pi * rng.random())
    p = random_qpair(GeneratorSpec("random", 3, 1.0 / q, seed), t2_norm=0.9)
    return p.T2, p.T1, q


def test_intertwining_zero_a(rng):
    T = contraction(rng, 2, norm=0.6)
    r = q_intertwining_coextension(np.zeros((2, 2)), T, T, 1j, 3, 2)
    assert operator_norm(r.B) == 0
    assert r.certificate["Y X1 = q X2 Y (interior)"] <= 1e-14


def test_intertwining_classical(rng):
    T = contraction(rng, 2, norm=0.6)
    A = 0.5 * T
    r = q_intertwining_coextension(A, T, T, 1.0, 3, 2)
    assert r.certificate["Y X1 = q X2 Y (interior)"] <= 1e-8
    assert r.certificate["Y|_H1 = A"] <= 1e-12


@given(seeds)
def test_intertwining_random(seed):
    A, T, q = unimodular_instance(seed)
    r = q_intertwining_coextension(A, T, T, q, 3, 3)
    c = r.certificate
    assert c["Y X1 = q X2 Y (interior)"] <= 1e-8
    assert c["B V1 = q V2 B"] <= 1e-8
    assert c["Y|_H1 = A"] <= 1e-12


def test_intertwining_gates(rng):
    T = contraction(rng, 2, norm=0.6)
    with pytest.raises(QNotUnimodular):
        q_intertwining_coextension(0.5 * T, T, T, 0.5, 2, 2)
    with pytest.raises(NotStrictContraction):
        q_intertwining_coextension(np.eye(2), np.eye(2), np.eye(2), 1.0, 2, 2)
    with pytest.raises(HypothesisViolated) as exc:
        q_intertwining_coextension(0.5 * np.eye(2), T, T, -1.0, 2, 2)
    assert exc.value.hypothesis == "A T1 = q T2 A"


def test_lift_is_input_for_triple():
    p = example_pair_jordan(1, 0.5, 0.25, 1j)
    t = q_coextension(p, 3, 1)
    Y = coiso_lift_q(p, 3)
    assert t.meta["lift_passes"] == Y.passes()
