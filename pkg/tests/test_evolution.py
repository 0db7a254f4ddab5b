import io
import math

import numpy as np
import pytest

from bellmat.bell import BellFamily
from bellmat.evolution import (
    EvolutionSpec,
    UnnormalizedStateError,
    b_of_theta,
    b_of_theta_sum,
    b_of_x,
    energies,
    evolve,
    fd_hamiltonian_x,
    hamiltonian_x,
    schrodinger_residual,
    theta_of_x,
    u_of_theta,
    write_trajectory_csv,
)


@pytest.fixture
def spec():
    return EvolutionSpec(BellFamily.jj("1/2", [0.7]))


def unitary_error(U: np.ndarray) -> float:
    return float(np.max(np.abs(U @ U.conj().T - np.eye(len(U)))))


def test_unitarity_over_random_parameters(spec):
    rng = np.random.default_rng(3)
    for x, t in rng.uniform(-5, 5, size=(50, 2)):
        assert unitary_error(b_of_x(spec, x)) < 1e-12
        assert unitary_error(b_of_theta(spec, t)) < 1e-12


def test_two_theta_routes_agree(spec):
    for t in np.linspace(-2, 2, 9):
        np.testing.assert_allclose(b_of_theta(spec, t), b_of_theta_sum(spec, t), atol=1e-14)


def test_x_and_theta_parameterizations_agree(spec):
    for x in (-2.0, 0.0, 0.5, 3.0):
        t = theta_of_x(x)
        assert math.isclose(math.cos(t), 1 / math.sqrt(1 + x * x))
        # B(x) is B(theta) with the sign of the sin term absorbed by B^{-1}
        np.testing.assert_allclose(b_of_x(spec, x), b_of_theta(spec, t), atol=1e-14)


def test_b_at_quarter_pi_is_identity(spec):
    assert np.max(np.abs(b_of_theta(spec, math.pi / 4) - spec.eye)) < 1e-14


def test_group_law(spec):
    a, b = 0.37, -1.2
    np.testing.assert_allclose(u_of_theta(spec, a) @ u_of_theta(spec, b), u_of_theta(spec, a + b), atol=1e-12)


def test_hamiltonian_x_matches_finite_difference(spec):
    x = 0.4
    errs = [np.max(np.abs(fd_hamiltonian_x(spec, x, h) - hamiltonian_x(spec, x))) for h in (1e-2, 5e-3)]
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_schrodinger_residual_second_order(spec):
    phi0 = np.array([0, 1, 0, 0], dtype=complex)
    res = []
    for steps in (50, 100):
        traj = evolve(spec, phi0, np.linspace(0.0, 1.0, steps + 1))
        res.append(schrodinger_residual(spec, traj))
    assert 3.5 <= res[0] / res[1] <= 4.5


def test_norm_and_energy_conserved(spec):
    traj = evolve(spec, np.array([1, 0, 0, 0], dtype=complex), np.linspace(0, 2, 41))
    assert np.max(np.abs(traj.norms - 1)) < 1e-12
    e = energies(spec, traj)
    assert np.ptp(e) < 1e-12


def test_half_scale_convention():
    s = EvolutionSpec(BellFamily.jj("1/2", [0.2]), scale=0.5)
    np.testing.assert_allclose(u_of_theta(s, 2.0), s.expm(-1.0), atol=1e-15)


def test_bad_inputs(spec):
    with pytest.raises(UnnormalizedStateError):
        evolve(spec, np.ones(4, dtype=complex), [0.0, 0.1])
    with pytest.raises(ValueError):
        evolve(spec, np.array([1, 0, 0, 0], dtype=complex), [0.0, 0.1, 0.5])


def test_csv_layout(spec):
    traj = evolve(spec, np.array([1, 0, 0, 0], dtype=complex), [0.0, 0.5])
    buf = io.StringIO()
    write_trajectory_csv(traj, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "theta,re0,im0,re1,im1,re2,im2,re3,im3"
    assert len(lines) == 3 and len(lines[1].split(",")) == 9
