from fractions import Fraction

import numpy as np
import pytest

from bellmat.bell import BellFamily, epsilon_variant
from bellmat.linalg import IndexSpace, Operator, permutation
from bellmat.scalar import LAMBDA_MINUS, LAMBDA_PLUS, ONE, PhaseScalar
from bellmat.yangbaxter import (
    ParametricOperator,
    bell_rx,
    braid_oracle,
    check_braid,
    check_braid_limit,
    check_M_algebra,
    check_modified_ybe,
    check_normalization,
    check_qybe,
    check_reparameterization,
    check_virtual,
    mybe_oracle,
    qybe_oracle,
    reparameterize,
    trig_check,
    yang_baxterize,
)


@pytest.mark.parametrize("j", ["1/2", "3/2"])
def test_braid_relation_exact(j):
    fam = BellFamily.jj(j)
    rep = check_braid(fam.B)
    assert rep.passed, rep.witness
    assert rep.details["far_commutation"]


@pytest.mark.parametrize("n", [2, 4])
def test_braid_relation_plain(n):
    assert check_braid(BellFamily.plain(n).B).passed


def test_braid_numeric_oracle_agrees():
    fam = BellFamily.jj("3/2")
    assert braid_oracle(fam.B, points=3, seed=11) < 1e-12


def test_epsilon_variant_fails_with_witness():
    rep = check_braid(epsilon_variant(BellFamily.plain(2)))
    assert not rep.passed
    w = rep.witness
    assert w["relation"] == "adjacent"
    assert {"row", "col", "row_labels", "col_labels", "residual"} <= set(w)


def test_swap_is_a_braid_representation():
    assert check_braid(permutation(IndexSpace.qubits(2))).passed


@pytest.mark.parametrize("j", ["1/2", "3/2"])
def test_M_algebra(j):
    rep = check_M_algebra(BellFamily.jj(j))
    assert rep.passed and rep.details["q_conditions"]


def test_M_algebra_mutant_is_caught():
    rep = check_M_algebra(BellFamily.jj("1/2"), _anticommute_sign=1)
    assert not rep.passed
    assert rep.witness["relation"] == "anticommute"


def test_yang_baxterization_form():
    fam = BellFamily.jj("1/2")
    R = yang_baxterize(fam.B, LAMBDA_PLUS, LAMBDA_MINUS)
    assert R == bell_rx(fam)
    assert R.at_zero() == fam.B
    assert R.coefficient((1,)) == fam.B_inv


def test_yang_baxterization_needs_two_eigenvalues():
    eye = Operator.identity(IndexSpace.qubits(2))
    with pytest.raises(ValueError):
        yang_baxterize(eye.scale(PhaseScalar.rational(2)), LAMBDA_PLUS, LAMBDA_MINUS)


@pytest.mark.parametrize("j", ["1/2"])
def test_qybe_and_normalization(j):
    R = bell_rx(BellFamily.jj(j))
    assert check_qybe(R).passed
    assert check_normalization(R).passed
    assert check_braid_limit(R).passed
    assert qybe_oracle(R, points=3, seed=2) < 1e-12


def test_qybe_rejects_a_wrong_slope():
    fam = BellFamily.jj("1/2")
    # B + x I is not a Baxterization of B
    bad = ParametricOperator.linear(fam.B, Operator.identity(fam.space))
    rep = check_qybe(bad)
    assert not rep.passed and rep.witness is not None


def test_modified_ybe():
    fam = BellFamily.jj("1/2")
    assert check_modified_ybe(fam).passed
    assert mybe_oracle(fam, points=3, seed=4) < 1e-12


def test_reparameterization_worked_example():
    assert reparameterize(Fraction(1, 3)) == Fraction(1, 2)
    rep = check_reparameterization(Fraction(1, 3), Fraction(1, 2))
    assert rep.passed


@pytest.mark.parametrize("t1,t2", [(0.3, 0.4), (-0.2, 0.9), (1.1, -0.5)])
def test_trig_solution(t1, t2):
    fam = BellFamily.jj("1/2", [0.7])
    assert trig_check(fam, t1, t2).passed


def test_trig_pole_rejected():
    fam = BellFamily.jj("1/2", [0.7])
    with pytest.raises(ValueError):
        trig_check(fam, np.pi / 2, 0.1)


def test_virtual_relations():
    std, lit = check_virtual(BellFamily.jj("1/2"))
    assert std.passed
    assert lit.informational and not lit.passed


def test_parametric_algebra():
    fam = BellFamily.jj("1/2")
    R = bell_rx(fam)
    eye = Operator.identity(fam.space)
    # R(x) R(x)^dagger = (1 + x^2) I for real x
    prod = R @ R.dagger()
    assert prod.coefficient((0,)) == eye
    assert prod.coefficient((1,)).is_zero()
    assert prod.coefficient((2,)) == eye
    assert np.allclose(R.evaluate({"x": 0.0}, fam.assignment or {1: 0.3}), fam.B.to_numpy({1: 0.3}))
    assert (R - R).is_zero()
    assert R.scale(ONE) == R
