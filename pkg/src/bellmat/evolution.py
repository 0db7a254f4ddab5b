"""Unitary solution families B(x), B(theta), their Hamiltonians and trajectories.

Everything here is floating point.  Exponentials of M are taken in closed
form, exp(t M) = cos(t) I + sin(t) M, which is exact because M^2 = -I.
"""

from __future__ import annotations

import csv
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import TextIO

import numpy as np

from .bell import BellFamily
from .linalg import StateVector


class UnnormalizedStateError(ValueError):
    pass


@dataclass
class EvolutionSpec:
    family: BellFamily
    assignment: Mapping[int, float] | None = None
    # 1/2 reproduces the older convention H = -(i/2) M
    scale: float = 1.0

    @cached_property
    def M(self) -> np.ndarray:
        a = self.assignment if self.assignment is not None else self.family.assignment
        return self.family.M.to_numpy(a)

    @cached_property
    def eye(self) -> np.ndarray:
        return np.eye(self.M.shape[0], dtype=complex)

    def expm(self, t: float) -> np.ndarray:
        """exp(t M)."""
        return math.cos(t) * self.eye + math.sin(t) * self.M


def b_of_x(spec: EvolutionSpec, x: float) -> np.ndarray:
    """B(x) = ((1 + x) I + (1 - x) M) / sqrt(2 (1 + x^2))."""
    rho = 1 + x * x
    return ((1 + x) * spec.eye + (1 - x) * spec.M) / math.sqrt(2 * rho)


def hamiltonian_x(spec: EvolutionSpec, x: float) -> np.ndarray:
    """H(x) = -i M / (1 + x^2)."""
    return -1j * spec.M / (1 + x * x)


def fd_hamiltonian_x(spec: EvolutionSpec, x: float, h: float) -> np.ndarray:
    """Central-difference i dB/dx B^{-1}."""
    dB = (b_of_x(spec, x + h) - b_of_x(spec, x - h)) / (2 * h)
    return 1j * dB @ np.linalg.inv(b_of_x(spec, x))


def theta_of_x(x: float) -> float:
    """Principal branch of cos(theta) = 1/sqrt(1 + x^2), sin(theta) = x/sqrt(1 + x^2)."""
    return math.atan(x)


def b_of_theta(spec: EvolutionSpec, theta: float) -> np.ndarray:
    """B(theta) = cos(theta) B + sin(theta) B^{-1} = exp((pi/4 - theta) M)."""
    return spec.expm(math.pi / 4 - theta)


def b_of_theta_sum(spec: EvolutionSpec, theta: float) -> np.ndarray:
    """Same matrix assembled as cos(theta) B + sin(theta) B^{-1} (independent route)."""
    B = (spec.eye + spec.M) / math.sqrt(2)
    B_inv = (spec.eye - spec.M) / math.sqrt(2)
    return math.cos(theta) * B + math.sin(theta) * B_inv


def hamiltonian_theta(spec: EvolutionSpec) -> np.ndarray:
    return -1j * spec.scale * spec.M


def u_of_theta(spec: EvolutionSpec, theta: float) -> np.ndarray:
    """U(theta) = exp(-scale * theta * M)."""
    return spec.expm(-spec.scale * theta)


@dataclass
class Trajectory:
    thetas: np.ndarray
    states: np.ndarray  # shape (len(thetas), dim)
    step: float
    norms: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.norms = np.linalg.norm(self.states, axis=1)


def evolve(spec: EvolutionSpec, phi0: np.ndarray | StateVector, thetas: Sequence[float]) -> Trajectory:
    """psi(theta) = U(theta) B phi0; with the default scale this is B(theta) phi0."""
    if isinstance(phi0, StateVector):
        phi0 = phi0.to_numpy(spec.assignment)
    phi0 = np.asarray(phi0, dtype=complex)
    if abs(np.linalg.norm(phi0) - 1) > 1e-10:
        raise UnnormalizedStateError(f"initial state has norm {np.linalg.norm(phi0)}")
    thetas = np.asarray(thetas, dtype=float)
    steps = np.diff(thetas)
    if len(steps) and not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-15):
        raise ValueError("theta grid must be uniform")
    psi0 = b_of_theta(spec, 0.0) @ phi0
    states = np.array([u_of_theta(spec, t) @ psi0 for t in thetas])
    return Trajectory(thetas, states, float(steps[0]) if len(steps) else 0.0)


def schrodinger_residual(spec: EvolutionSpec, traj: Trajectory) -> float:
    """max || i (psi(t+h) - psi(t-h)) / 2h - H psi(t) || over interior grid points."""
    H = hamiltonian_theta(spec)
    psi = traj.states
    h = traj.step
    deriv = 1j * (psi[2:] - psi[:-2]) / (2 * h)
    res = deriv - psi[1:-1] @ H.T
    return float(np.max(np.linalg.norm(res, axis=1)))


def energies(spec: EvolutionSpec, traj: Trajectory) -> np.ndarray:
    H = hamiltonian_theta(spec)
    return np.real(np.einsum("ti,ij,tj->t", traj.states.conj(), H, traj.states))


def write_trajectory_csv(traj: Trajectory, out: TextIO) -> None:
    dim = traj.states.shape[1]
    writer = csv.writer(out, lineterminator="\n")
    header = ["theta"]
    for k in range(dim):
        header += [f"re{k}", f"im{k}"]
    writer.writerow(header)
    for t, psi in zip(traj.thetas, traj.states):
        row = [repr(float(t))]
        for z in psi:
            row += [repr(float(z.real)), repr(float(z.imag))]
        writer.writerow(row)
