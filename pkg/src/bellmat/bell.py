"""Almost-complex structures, Bell matrices, deformation parameters and GHZ states."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .halfint import eps, format_half, is_power_of_two, parse_half, spin_labels
from .linalg import IndexSpace, Operator, StateVector, kron, pauli
from .report import VerificationReport, timed
from .scalar import INV_SQRT2, ONE, PhaseScalar


class UnsupportedKindError(ValueError):
    """The requested Bell-matrix family is deferred (e.g. the J1 != J2 type)."""


def as_j2(j: str | Fraction | int) -> int:
    """Twice-J from "3/2" or Fraction(3, 2); plain ints are read as J itself."""
    if isinstance(j, float):
        raise TypeError("pass J as a fraction string or Fraction, not a float")
    return parse_half(j)


def label_map(ms: Sequence[Fraction | str]) -> tuple[int, Fraction]:
    """Map qubit labels (m_1..m_N) to the GHZ index k and the composite label mu."""
    ms = [Fraction(m) for m in ms]
    n = len(ms)
    if any(abs(m) != Fraction(1, 2) for m in ms):
        raise ValueError("qubit labels must be ±1/2")
    mu = sum((2 ** (n - i) * m for i, m in enumerate(ms, start=1)), Fraction(0))
    k = 2 ** (n - 1) + Fraction(1, 2) - mu
    return int(k), mu


@dataclass
class QTable:
    """Deformation parameters q_lm = u_l u_m with u_{-l} = 1/u_l."""

    j2: int
    units: dict[int, PhaseScalar]
    angles: dict[int, float] | None = None

    @property
    def labels(self) -> list[int]:
        return spin_labels(self.j2)

    def unit(self, l2: int) -> PhaseScalar:
        if l2 > 0:
            return self.units[l2]
        return self.units[-l2].inverse()

    def q(self, a: int, b: int) -> PhaseScalar:
        return self.unit(a) * self.unit(b)

    @property
    def assignment(self) -> dict[int, float]:
        return dict(self.angles or {})

    @property
    def symbolic(self) -> bool:
        return any(u.symbols() for u in self.units.values())


def build_q(
    j: str | Fraction,
    phases: Sequence[float] | None = None,
    *,
    zeta_powers: Sequence[int] | None = None,
) -> QTable:
    """Deformation table for spin J.

    ``phases`` lists numeric angles phi_J, phi_{J-1}, ..., phi_{1/2}; the table
    stays symbolic and carries the angles as an evaluation assignment.  With
    ``zeta_powers`` the units are exact: u_l = zeta8**k, i.e. phi_l = k*pi/2.
    Leaving both out gives fully symbolic phases.
    """
    j2 = as_j2(j)
    if j2 % 2 == 0 or not is_power_of_two(j2 + 1):
        raise UnsupportedKindError(f"2J+1 must be a power of two, got J={format_half(j2)}")
    positive = [lab for lab in spin_labels(j2) if lab > 0]
    if phases is not None and zeta_powers is not None:
        raise ValueError("give either numeric phases or exact zeta8 powers, not both")
    count = len(positive)
    given = phases if phases is not None else zeta_powers
    if given is not None and len(given) != count:
        raise ValueError(f"J={format_half(j2)} needs {count} phases, got {len(given)}")
    if zeta_powers is not None:
        units = {lab: PhaseScalar.zeta(k) for lab, k in zip(positive, zeta_powers)}
        return QTable(j2, units)
    units = {lab: PhaseScalar.u(lab) for lab in positive}
    angles = {lab: float(p) for lab, p in zip(positive, phases)} if phases is not None else None
    return QTable(j2, units, angles)


def check_q_constraints(qt: QTable) -> VerificationReport:
    """Verify every condition on q over all index triples, exactly."""
    rep = VerificationReport("q-constraints", {"J": format_half(qt.j2)})
    with timed(rep):
        labs = qt.labels
        q = qt.q
        failures = []
        for a in labs:
            for b in labs:
                if q(a, b) * q(-a, -b) != ONE:
                    failures.append(("q_ab q_-a-b = 1", a, b))
                if q(a, b).conjugate() * q(a, b) != ONE:
                    failures.append(("conj(q) q = 1", a, b))
                if q(a, b) != q(b, a):
                    failures.append(("q symmetric", a, b))
                for c in labs:
                    if q(a, b) * q(-a, -b) != q(b, c) * q(-b, -c):
                        failures.append(("balanced products", a, b, c))
                    if q(b, c) != q(a, b) * q(-b, c) * q(-a, b):
                        failures.append(("first three-term", a, b, c))
                    if q(a, b) != q(b, c) * q(a, -b) * q(b, -c):
                        failures.append(("second three-term", a, b, c))
                    if q(a, b) * q(-a, b) != q(b, c) * q(b, -c):
                        failures.append(("algebra side condition", a, b, c))
        rep.passed = not failures
        if failures:
            name, *idx = failures[0]
            rep.witness = {"condition": name, "labels": [format_half(x) for x in idx]}
    return rep


@dataclass
class BellFamily:
    """Either the undeformed N-qubit Bell matrix or the deformed J⊗J one."""

    kind: str
    n: int | None = None
    qtable: QTable | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def plain(cls, n: int) -> BellFamily:
        if n < 2:
            raise ValueError("GHZ construction needs N >= 2")
        return cls("plain", n=n)

    @classmethod
    def jj(cls, j: str | Fraction, phases=None, *, zeta_powers=None) -> BellFamily:
        return cls("jj", qtable=build_q(j, phases, zeta_powers=zeta_powers))

    @classmethod
    def from_qtable(cls, qt: QTable) -> BellFamily:
        return cls("jj", qtable=qt)

    @classmethod
    def of_kind(cls, kind: str, **kw) -> BellFamily:
        if kind == "plain":
            return cls.plain(kw["n"])
        if kind == "jj":
            return cls.jj(kw["j"], kw.get("phases"), zeta_powers=kw.get("zeta_powers"))
        raise UnsupportedKindError(f"Bell family kind {kind!r} is not supported (only plain and jj)")

    @property
    def space(self) -> IndexSpace:
        if self.kind == "plain":
            return IndexSpace.qubits(self.n)
        return IndexSpace.spins(self.qtable.j2, 2)

    @property
    def assignment(self) -> dict[int, float]:
        return self.qtable.assignment if self.qtable else {}

    @property
    def j2(self) -> int:
        """Twice-J of one braid factor V (Bell matrix acts on V⊗V)."""
        if self.kind == "jj":
            return self.qtable.j2
        if self.n % 2:
            raise UnsupportedKindError("odd-N Bell matrices are not of the J⊗J type")
        return 2 ** (self.n // 2) - 1

    def describe(self) -> dict:
        if self.kind == "plain":
            return {"kind": "plain", "N": self.n}
        mode = "sym" if self.qtable.angles is None else "numeric"
        if not self.qtable.symbolic:
            mode = "exact"
        return {"kind": "jj", "J": format_half(self.qtable.j2), "phases": mode}

    @cached_property
    def M(self) -> Operator:
        return build_M(self)

    @cached_property
    def B(self) -> Operator:
        return build_B(self)

    @cached_property
    def B_inv(self) -> Operator:
        # (I - M)/sqrt2, the inverse because M^2 = -I
        return (Operator.identity(self.space) - self.M).scale(INV_SQRT2)


def build_M(family: BellFamily) -> Operator:
    """Almost-complex structure: M[(i,j),(k,l)] = eps(i) q_ij delta_{i,-k} delta_{j,-l}."""
    space = family.space
    dim = space.dim
    rows: dict[int, dict[int, PhaseScalar]] = {}
    if family.kind == "plain":
        for r in range(dim):
            sign = 1 if r < dim // 2 else -1
            rows[r] = {dim - 1 - r: PhaseScalar.rational(sign)}
    elif family.kind == "jj":
        qt = family.qtable
        for r in range(dim):
            i, j = space.labels(r)
            rows[r] = {dim - 1 - r: qt.q(i, j) * eps(i)}
    else:
        raise UnsupportedKindError(family.kind)
    return Operator(space, rows)


def build_B(family: BellFamily) -> Operator:
    """B = (I + M)/sqrt2."""
    return (Operator.identity(family.space) + family.M).scale(INV_SQRT2)


def pauli_form_M(n: int) -> Operator:
    """i*sigma_y ⊗ sigma_x^{⊗(N-1)}, built from explicit Kronecker products."""
    out = pauli("iy")
    for _ in range(n - 1):
        out = kron(out, pauli("x"))
    return out


def epsilon_variant(family: BellFamily) -> Operator:
    """The matrix with entries eps(i) B[(i,j),(k,l)] (not a braid representation)."""
    B = family.B
    space = family.space
    rows = {}
    for r in range(space.dim):
        sign = eps(space.labels(r)[0])
        rows[r] = {c: v * sign for c, v in B.row(r).items()}
    return Operator(space, rows)


def ghz_generate(family: BellFamily | int) -> list[StateVector]:
    """All 2^N GHZ states: the columns of B applied to the product basis."""
    if isinstance(family, int):
        family = BellFamily.plain(family)
    B = family.B
    return [B.apply(StateVector.basis(family.space, k)) for k in range(family.space.dim)]


def gram_matrix(states: Sequence[StateVector]) -> list[list[PhaseScalar]]:
    return [[a.inner(b) for b in states] for a in states]


def qubit_count(space: IndexSpace) -> int:
    dim = space.dim
    if not is_power_of_two(dim):
        raise ValueError(f"{space} is not a multi-qubit space")
    return dim.bit_length() - 1


def reduced_density(psi: np.ndarray, n_qubits: int, qubit: int) -> np.ndarray:
    """Single-qubit reduced density matrix of a pure state (qubit is 0-based)."""
    t = np.moveaxis(psi.reshape((2,) * n_qubits), qubit, 0).reshape(2, -1)
    return t @ t.conj().T


def max_reduced_density_deviation(states: Sequence[StateVector], assignment: Mapping[int, float] | None = None) -> float:
    """Largest |rho_1 - I/2| entry over all states and all single qubits."""
    worst = 0.0
    for s in states:
        n = qubit_count(s.space)
        psi = s.to_numpy(assignment)
        for q in range(n):
            rho = reduced_density(psi, n, q)
            worst = max(worst, float(np.max(np.abs(rho - np.eye(2) / 2))))
    return worst
