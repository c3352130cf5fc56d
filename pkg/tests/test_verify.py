import json
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qlift.dilation import coisometric_extension, schaeffer_isometric, unitary_dilation
from qlift.errors import DimensionMismatch, LevelOutOfRange
from qlift.lifting import QPair, coiso_lift_q, isometric_lift_q
from qlift.qalgebra import GeneratorSpec, example_pair_jordan, random_qpair
from qlift.verify import (check_dilation_identity, check_lift, check_q_commuting,
                          purity_heuristic)

from oracles import contraction

seeds = st.integers(0, 2**32 - 1)


def test_q_commuting_examples():
    p = example_pair_jordan(1, 0.5, 0.25, 1j)
    c = check_q_commuting(p.T1, p.T2, p.q)
    assert c.passed and c.checks[0].residual <= 1e-15
    c = check_q_commuting(np.eye(2), np.zeros((2, 2)), 3.0)
    assert c.passed and c.checks[0].residual == 0
    c = check_q_commuting(np.eye(2), np.eye(2), 2.0)
    assert not c.passed and c.checks[0].residual == pytest.approx(0.5)


def test_q_commuting_dimension_check():
    with pytest.raises(DimensionMismatch):
        check_q_commuting(np.eye(2), np.eye(3), 1.0)


@pytest.mark.parametrize("build", [schaeffer_isometric, coisometric_extension, unitary_dilation])
def test_dilation_identity(build, rng):
    b = build(contraction(rng, 3, norm=1.0), 5)
    c = check_dilation_identity(b, 5)
    assert c.passed
    assert c["P_H op^0|_H = T^0"].residual == 0
    assert max(x.residual for x in c.checks) <= 1e-10
    if b.kind == "unitary":
        assert c["P_H op^-5|_H = T^-5"].residual <= 1e-10


def test_dilation_identity_range(rng):
    b = schaeffer_isometric(contraction(rng, 2), 2)
    with pytest.raises(LevelOutOfRange):
        check_dilation_identity(b, 3)


def test_check_lift_zero():
    r = coiso_lift_q(QPair(0.5 * np.eye(2), np.zeros((2, 2)), 1.0), 3)
    assert check_lift(r).passed


@given(seed=seeds, q=st.complex_numbers(min_magnitude=0.4, max_magnitude=1.4))
def test_check_lift_reproduces(seed, q):
    r = isometric_lift_q(random_qpair(GeneratorSpec("random", 3, q, seed)), 3)
    c = check_lift(r)
    assert c.passed
    assert c.metadata["max_stored_drift"] <= 1e-12


def test_check_lift_detects_tampering():
    r = isometric_lift_q(example_pair_jordan(1, 0.5, 0.25, 1j), 4)
    bad = replace(r, op=r.op + 1e-3)
    c = check_lift(bad)
    assert not c.passed
    assert c.metadata["max_stored_drift"] > 1e-6


def test_certificate_serializes():
    r = isometric_lift_q(example_pair_jordan(1, 0.5, 0.25, 1j), 2)
    doc = json.loads(json.dumps(check_lift(r).to_dict()))
    assert set(doc["checks"][0]) == {"label", "residual", "window", "pass"}
    assert doc["tolerances"]["residual_tol"] == 1e-8


def test_purity_coshift_decays():
    b = coisometric_extension(np.zeros((1, 1)), 6)
    c = purity_heuristic(b, 2, 4)
    assert c.passed and c.metadata["heuristic"]
    assert c.metadata["decay"][-1] == 0


def test_purity_unitary_fails():
    b = unitary_dilation(np.eye(2), 3)
    c = purity_heuristic(b, 1, 5)
    assert not c.passed
    assert "HEURISTIC" in c.checks[0].label


def test_purity_window_range():
    b = coisometric_extension(np.zeros((1, 1)), 2)
    with pytest.raises(LevelOutOfRange):
        purity_heuristic(b, 2, 3)


def test_certificates_deterministic():
    p = example_pair_jordan(1, 0.5, 0.25, 0.5)
    a = json.dumps(check_lift(coiso_lift_q(p, 3)).to_dict(), sort_keys=True)
    b = json.dumps(check_lift(coiso_lift_q(p, 3)).to_dict(), sort_keys=True)
    assert a == b
