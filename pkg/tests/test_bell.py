from fractions import Fraction

import numpy as np
import pytest

from bellmat.bell import (
    BellFamily,
    UnsupportedKindError,
    build_q,
    check_q_constraints,
    epsilon_variant,
    ghz_generate,
    gram_matrix,
    max_reduced_density_deviation,
    pauli_form_M,
)
from bellmat.linalg import IndexSpace, Operator
from bellmat.scalar import INV_SQRT2, ONE, ZERO, PhaseScalar

B4_ROWS = [
    [1, 0, 0, 1],
    [0, 1, 1, 0],
    [0, -1, 1, 0],
    [-1, 0, 0, 1],
]

B8_ROWS = [
    [1, 0, 0, 0, 0, 0, 0, 1],
    [0, 1, 0, 0, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 1, 0, 0],
    [0, 0, 0, 1, 1, 0, 0, 0],
    [0, 0, 0, -1, 1, 0, 0, 0],
    [0, 0, -1, 0, 0, 1, 0, 0],
    [0, -1, 0, 0, 0, 0, 1, 0],
    [-1, 0, 0, 0, 0, 0, 0, 1],
]


def scaled(rows, n):
    return Operator.from_dense(IndexSpace.qubits(n), [[INV_SQRT2 * v for v in row] for row in rows])


def test_b4_and_b8_entries():
    assert BellFamily.plain(2).B == scaled(B4_ROWS, 2)
    assert BellFamily.plain(3).B == scaled(B8_ROWS, 3)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_pauli_form_matches_component_form(n):
    assert pauli_form_M(n) == BellFamily.plain(n).M


def test_deformed_b4_shape():
    fam = BellFamily.jj("1/2")
    q = fam.qtable.q(1, 1)
    rows = [
        [ONE, ZERO, ZERO, q],
        [ZERO, ONE, ONE, ZERO],
        [ZERO, -ONE, ONE, ZERO],
        [-q.inverse(), ZERO, ZERO, ONE],
    ]
    want = Operator.from_dense(IndexSpace.spins(1, 2), [[INV_SQRT2 * v for v in r] for r in rows])
    assert fam.B == want


@pytest.mark.parametrize("j", ["1/2", "3/2"])
def test_deformed_bell_is_unitary_and_M_squares_to_minus_one(j):
    fam = BellFamily.jj(j)
    eye = Operator.identity(fam.space)
    assert fam.B @ fam.B.dagger() == eye
    assert fam.M @ fam.M == -eye
    assert fam.B @ fam.B_inv == eye


def test_zero_phases_recover_undeformed_structure():
    fam = BellFamily.jj("1/2", zeta_powers=[0])
    assert fam.B == BellFamily.plain(2).B


@pytest.mark.parametrize("j", ["1/2", "3/2", "7/2"])
def test_q_constraints_hold(j):
    assert check_q_constraints(build_q(j)).passed


def test_q_table_symmetry_and_units():
    qt = build_q("3/2")
    for a in qt.labels:
        for b in qt.labels:
            assert qt.q(a, b) == qt.q(b, a)
            assert qt.q(a, b) * qt.q(-a, -b) == ONE


def test_unsupported_spins_and_kinds():
    with pytest.raises(UnsupportedKindError):
        build_q(Fraction(1))
    with pytest.raises(UnsupportedKindError):
        build_q("5/2")
    with pytest.raises(UnsupportedKindError):
        BellFamily.of_kind("j1j2")
    with pytest.raises(ValueError):
        build_q("3/2", [0.1])


def test_numeric_phases_keep_symbols():
    fam = BellFamily.jj("3/2", [0.3, 0.7])
    assert fam.qtable.symbolic
    B = fam.B.to_numpy(fam.assignment)
    np.testing.assert_allclose(B @ B.conj().T, np.eye(16), atol=1e-13)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ghz_orthonormal_and_maximally_mixed(n):
    states = ghz_generate(n)
    assert len(states) == 2 ** n
    gram = gram_matrix(states)
    assert all(gram[i][j] == (ONE if i == j else ZERO) for i in range(2 ** n) for j in range(2 ** n))
    assert max_reduced_density_deviation(states) < 1e-12


def test_ghz_state_form():
    # column k of B: (|m> + s|-m>)/sqrt2 with the sign read off B
    psi = ghz_generate(2)[0]
    assert psi.amplitudes == {0: INV_SQRT2, 3: -INV_SQRT2}


def test_epsilon_variant_differs():
    fam = BellFamily.plain(2)
    eps_b = epsilon_variant(fam)
    assert eps_b != fam.B
    assert eps_b[0, 0] == INV_SQRT2 and eps_b[3, 3] == -INV_SQRT2


def test_describe_modes():
    assert BellFamily.jj("1/2").describe()["phases"] == "sym"
    assert BellFamily.jj("1/2", [0.2]).describe()["phases"] == "numeric"
    assert BellFamily.jj("1/2", zeta_powers=[1]).describe()["phases"] == "exact"
    assert BellFamily.plain(3).describe() == {"kind": "plain", "N": 3}


def test_exact_zeta_phase():
    fam = BellFamily.jj("1/2", zeta_powers=[1])
    assert fam.qtable.q(1, 1) == PhaseScalar.zeta(2)
