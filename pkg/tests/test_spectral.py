import pytest

from bellmat.bell import BellFamily
from bellmat.linalg import IndexSpace, Operator
from bellmat.scalar import I, ONE, PhaseScalar
from bellmat.spectral import (
    DIAG_MINUS,
    DIAG_PLUS,
    InvalidFError,
    b4_reference_n,
    b4_pauli_n,
    build_diagonalizer,
    canonical_diagonal,
    characteristic_check,
    check_diagonalizer,
    check_projector_baxterization,
    check_spectral_reconstruction,
    diagonalizer_from_n,
    projectors,
)

FAMILIES = ["1/2", "3/2"]


def test_diagonal_constants():
    assert DIAG_PLUS * PhaseScalar.zeta(-1) == ONE
    assert DIAG_PLUS + DIAG_MINUS == PhaseScalar.zeta(1) - PhaseScalar.zeta(3)
    assert DIAG_PLUS - DIAG_MINUS == I * (PhaseScalar.zeta(1) - PhaseScalar.zeta(3))


@pytest.mark.parametrize("j", FAMILIES)
def test_characteristic_equation(j):
    assert characteristic_check(BellFamily.jj(j).B).passed


def test_characteristic_negative_control():
    rep = characteristic_check(Operator.identity(IndexSpace.qubits(2)))
    assert not rep.passed and rep.witness


@pytest.mark.parametrize("j", FAMILIES)
def test_projectors(j):
    fam = BellFamily.jj(j)
    rep = projectors(fam.M).check()
    assert rep.passed
    half = fam.space.dim / 2
    assert rep.details["traces"] == [half, half]


def test_projectors_require_complex_structure():
    with pytest.raises(ValueError):
        projectors(Operator.identity(IndexSpace.qubits(2)))


@pytest.mark.parametrize("j", FAMILIES)
def test_spectral_reconstruction_and_baxterization(j):
    fam = BellFamily.jj(j)
    assert check_spectral_reconstruction(fam).passed
    assert check_projector_baxterization(fam).passed


@pytest.mark.parametrize("j", FAMILIES)
def test_canonical_diagonalization(j):
    fam = BellFamily.jj(j)
    diag = build_diagonalizer(fam)
    rep = check_diagonalizer(diag, fam.B, fam.M, canonical_diagonal(fam.space.dim))
    assert rep.passed, rep.details
    assert all(rep.details[k] for k in ("N_hermitian", "N_involution", "D_unitary", "N_M_anticommute"))


def test_other_sign_choice_reverses_order():
    fam = BellFamily.jj("1/2")
    diag = build_diagonalizer(fam, lambda lab: 1)
    rep = check_diagonalizer(diag, fam.B, fam.M)
    assert rep.passed
    assert diag.conjugate(fam.B).diagonal() == [DIAG_MINUS, DIAG_MINUS, DIAG_PLUS, DIAG_PLUS]


def test_invalid_f_rejected():
    fam = BellFamily.jj("1/2")
    with pytest.raises(InvalidFError):
        build_diagonalizer(fam, {1: 2, -1: 2})
    with pytest.raises(InvalidFError):
        build_diagonalizer(fam, {1: 1, -1: -1})


def test_undeformed_b4_example():
    B = BellFamily.plain(2)
    diag = diagonalizer_from_n(b4_pauli_n())
    expected = [DIAG_MINUS, DIAG_PLUS, DIAG_MINUS, DIAG_PLUS]
    rep = check_diagonalizer(diag, B.B, B.M, expected)
    assert rep.passed, rep.details


def test_reference_deformed_n_is_not_hermitian():
    fam = BellFamily.jj("1/2")
    q = fam.qtable.q(1, 1)
    N = b4_reference_n(q)
    # taken at face value this N equals -M: anti-Hermitian, so (1 + iN)/sqrt2 is not unitary
    assert N == -fam.M
    rep = check_diagonalizer(diagonalizer_from_n(N), fam.B, fam.M, canonical_diagonal(4))
    assert not rep.passed
    assert not rep.details["N_hermitian"] and not rep.details["D_unitary"]


def test_literal_dbd_differs_from_conjugation():
    fam = BellFamily.jj("1/2")
    rep = check_diagonalizer(build_diagonalizer(fam), fam.B, fam.M)
    assert rep.passed and rep.details["literal_DBD_same"] is False
