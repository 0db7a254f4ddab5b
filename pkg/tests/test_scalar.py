import cmath
import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bellmat.scalar import (
    I,
    INV_SQRT2,
    LAMBDA_MINUS,
    LAMBDA_PLUS,
    ONE,
    SQRT2,
    ZERO,
    ZETA8,
    MissingAssignmentError,
    PhaseScalar,
)
from conftest import angles, field_elements, phase_scalars


def close(a: complex, b: complex, tol: float = 1e-9) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def test_cyclotomic_constants():
    assert ZETA8 ** 8 == ONE
    assert ZETA8 ** 4 == -ONE
    assert I * I == -ONE
    assert SQRT2 * SQRT2 == PhaseScalar.rational(2)
    assert SQRT2 * INV_SQRT2 == ONE
    assert LAMBDA_PLUS * LAMBDA_MINUS == ONE
    assert LAMBDA_PLUS + LAMBDA_MINUS == SQRT2
    assert close(LAMBDA_PLUS.evaluate(), cmath.exp(-1j * cmath.pi / 4))


def test_zeta_powers_reduce_to_basis():
    # zeta^5 = -zeta, stored in the basis {1, z, z^2, z^3}
    assert PhaseScalar.zeta(5) == -ZETA8
    assert PhaseScalar.zeta(-1) == -PhaseScalar.zeta(3)


@given(phase_scalars(), phase_scalars(), phase_scalars())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    assert a * ONE == a


@given(phase_scalars(), phase_scalars(), angles)
def test_evaluation_is_a_ring_homomorphism(a, b, ang):
    assert close((a * b).evaluate(ang), a.evaluate(ang) * b.evaluate(ang))
    assert close((a + b).evaluate(ang), a.evaluate(ang) + b.evaluate(ang))


@given(phase_scalars(), phase_scalars(), angles)
def test_conjugation(a, b, ang):
    assert close(a.conjugate().evaluate(ang), a.evaluate(ang).conjugate())
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a.conjugate().conjugate() == a


@given(field_elements())
def test_field_inverse(x):
    assert x * x.inverse() == ONE


@given(field_elements(), st.integers(-3, 3), st.integers(-3, 3))
def test_inverse_with_units(x, e1, e3):
    y = x * PhaseScalar.u(1, e1) * PhaseScalar.u(3, e3)
    assert y * y.inverse() == ONE
    assert y / y == ONE


@given(phase_scalars(), phase_scalars(), st.sampled_from([3, 5, 7]))
def test_galois_is_multiplicative(a, b, k):
    assert (a * b).galois(k) == a.galois(k) * b.galois(k)
    assert (a + b).galois(k) == a.galois(k) + b.galois(k)


def test_non_monomial_inverse_rejected():
    with pytest.raises(ValueError):
        (ONE + PhaseScalar.u(1)).inverse()
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_negative_label_is_inverse_symbol():
    assert PhaseScalar.u(-1) * PhaseScalar.u(1) == ONE
    assert PhaseScalar.u(1).conjugate() == PhaseScalar.u(-1)


def test_unit_evaluates_to_half_angle():
    assert close(PhaseScalar.u(1).evaluate({1: 0.8}), cmath.exp(0.4j))
    q = PhaseScalar.u(1) * PhaseScalar.u(1)
    assert close(q.evaluate({1: 0.8}), cmath.exp(0.8j))


def test_missing_assignment_names_the_symbol():
    with pytest.raises(MissingAssignmentError, match=r"u\[3/2\]"):
        PhaseScalar.u(3).evaluate({1: 0.1})


def test_substitute_zeta_powers():
    x = PhaseScalar.u(1, 2) + I
    assert x.substitute({1: PhaseScalar.zeta(1)}) == I + I
    assert x.substitute({1: ONE}) == ONE + I


@given(phase_scalars())
def test_json_round_trip(a):
    data = json.loads(json.dumps(a.to_json()))
    assert PhaseScalar.from_json(data) == a


def test_json_renormalizes():
    # zeta8 exponent 5 and a split coefficient come back canonical
    raw = [
        {"coeff": [1, 2], "zeta8": 5, "umono": {"1/2": 1}},
        {"coeff": [1, 2], "zeta8": 5, "umono": {"1/2": 1}},
    ]
    assert PhaseScalar.from_json(raw) == -ZETA8 * PhaseScalar.u(1)


def test_pretty_printing():
    assert str(INV_SQRT2) == "1/2√2"
    assert str(I) == "i"
    assert str(ZERO) == "0"
    assert str(PhaseScalar.rational(Fraction(-3, 4))) == "-3/4"


def test_rational_queries():
    assert PhaseScalar.rational(Fraction(2, 3)).rational_value() == Fraction(2, 3)
    assert not I.is_rational()
    assert PhaseScalar.u(1).is_monomial()
    assert not (ONE + PhaseScalar.u(1)).is_monomial()
