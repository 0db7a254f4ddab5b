"""Sparse exact operators on labeled tensor-product spaces.

Basis vectors are enumerated row-major over the factors, each spin-J factor
listed as J, J-1, ..., -J.  With this layout the Bell matrices come out with
exactly the row/column order used when they are written as explicit arrays.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import prod

import numpy as np

from .halfint import format_half, parse_half
from .scalar import ONE, ZERO, PhaseScalar


class DimensionMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class IndexSpace:
    """Ordered tensor factors; each factor is a spin-J space given by twice J."""

    factors: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(j2 < 1 for j2 in self.factors):
            raise ValueError(f"factor spins must be positive, got {self.factors}")

    @classmethod
    def qubits(cls, n: int) -> IndexSpace:
        return cls((1,) * n)

    @classmethod
    def spins(cls, j2: int, n: int) -> IndexSpace:
        return cls((j2,) * n)

    @cached_property
    def dims(self) -> tuple[int, ...]:
        return tuple(j2 + 1 for j2 in self.factors)

    @cached_property
    def dim(self) -> int:
        return prod(self.dims)

    def labels(self, index: int) -> tuple[int, ...]:
        """Twice-valued spin labels of a flat basis index."""
        out = []
        for j2, d in zip(reversed(self.factors), reversed(self.dims)):
            index, pos = divmod(index, d)
            out.append(j2 - 2 * pos)
        return tuple(reversed(out))

    def index(self, labels: Sequence[int]) -> int:
        if len(labels) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} labels, got {len(labels)}")
        idx = 0
        for lab, j2, d in zip(labels, self.factors, self.dims):
            if abs(lab) > j2 or (j2 - lab) % 2:
                raise ValueError(f"label {format_half(lab)} not in spin {format_half(j2)}")
            idx = idx * d + (j2 - lab) // 2
        return idx

    def regroup(self, groups: int) -> IndexSpace:
        """Merge consecutive factors into ``groups`` equal blocks (same flat order)."""
        n = len(self.factors)
        if groups <= 0 or n % groups:
            raise DimensionMismatchError(f"cannot split {n} factors into {groups} groups")
        size = n // groups
        merged = tuple(prod(self.dims[g * size : (g + 1) * size]) - 1 for g in range(groups))
        return IndexSpace(merged)

    def __mul__(self, other: IndexSpace) -> IndexSpace:
        return IndexSpace(self.factors + other.factors)

    def to_json(self) -> list[str]:
        return [format_half(j2) for j2 in self.factors]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> IndexSpace:
        return cls(tuple(parse_half(s) for s in data))

    def __str__(self) -> str:
        return "⊗".join(f"V[{format_half(j2)}]" for j2 in self.factors)


Rows = dict[int, dict[int, PhaseScalar]]


def _as_scalar(value) -> PhaseScalar:
    if isinstance(value, PhaseScalar):
        return value
    return PhaseScalar.rational(Fraction(value))


class Operator:
    """Immutable sparse endomorphism with exact entries; no stored zeros."""

    __slots__ = ("space", "_rows")

    def __init__(self, space: IndexSpace, rows: Rows | None = None) -> None:
        self.space = space
        self._rows: Rows = rows or {}

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls, space: IndexSpace) -> Operator:
        return cls(space)

    @classmethod
    def identity(cls, space: IndexSpace) -> Operator:
        return cls(space, {i: {i: ONE} for i in range(space.dim)})

    @classmethod
    def from_entries(cls, space: IndexSpace, entries: Iterable[tuple[int, int, object]]) -> Operator:
        rows: Rows = {}
        for r, c, v in entries:
            if not (0 <= r < space.dim and 0 <= c < space.dim):
                raise IndexError(f"entry ({r}, {c}) outside dimension {space.dim}")
            row = rows.setdefault(r, {})
            row[c] = row.get(c, ZERO) + _as_scalar(v)
        return cls(space, _prune(rows))

    @classmethod
    def from_dense(cls, space: IndexSpace, matrix: Sequence[Sequence[object]]) -> Operator:
        if len(matrix) != space.dim:
            raise DimensionMismatchError(f"{len(matrix)} rows for dimension {space.dim}")
        return cls.from_entries(
            space, ((r, c, v) for r, row in enumerate(matrix) for c, v in enumerate(row) if v != 0)
        )

    # -- inspection -------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.space.dim

    def entries(self) -> Iterator[tuple[int, int, PhaseScalar]]:
        for r in sorted(self._rows):
            row = self._rows[r]
            for c in sorted(row):
                yield r, c, row[c]

    def row(self, r: int) -> dict[int, PhaseScalar]:
        return dict(self._rows.get(r, {}))

    def __getitem__(self, rc: tuple[int, int]) -> PhaseScalar:
        r, c = rc
        return self._rows.get(r, {}).get(c, ZERO)

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self._rows.values())

    def is_zero(self) -> bool:
        return not self._rows

    def is_diagonal(self) -> bool:
        return all(set(row) == {r} for r, row in self._rows.items())

    def diagonal(self) -> list[PhaseScalar]:
        return [self[i, i] for i in range(self.dim)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Operator):
            return NotImplemented
        return self.space.dim == other.space.dim and self._rows == other._rows

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Operator({self.space}, nnz={self.nnz})"

    # -- algebra ----------------------------------------------------------

    def _check(self, other: Operator | StateVector) -> None:
        if self.space.dim != other.space.dim:
            raise DimensionMismatchError(f"{self.space} (dim {self.dim}) vs {other.space} (dim {other.space.dim})")

    def __add__(self, other: Operator) -> Operator:
        self._check(other)
        rows = {r: dict(row) for r, row in self._rows.items()}
        for r, orow in other._rows.items():
            row = rows.setdefault(r, {})
            for c, v in orow.items():
                row[c] = row[c] + v if c in row else v
        return Operator(self.space, _prune(rows))

    def __neg__(self) -> Operator:
        return Operator(self.space, {r: {c: -v for c, v in row.items()} for r, row in self._rows.items()})

    def __sub__(self, other: Operator) -> Operator:
        return self + (-other)

    def scale(self, s: PhaseScalar | int | Fraction) -> Operator:
        s = _as_scalar(s)
        if s.is_zero():
            return Operator(self.space)
        return Operator(self.space, _prune({r: {c: v * s for c, v in row.items()} for r, row in self._rows.items()}))

    def __mul__(self, s: PhaseScalar | int | Fraction) -> Operator:
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other: Operator | StateVector) -> Operator | StateVector:
        self._check(other)
        if isinstance(other, StateVector):
            return self.apply(other)
        rows: Rows = {}
        orows = other._rows
        for r, row in self._rows.items():
            acc: dict[int, PhaseScalar] = {}
            for k, a in row.items():
                brow = orows.get(k)
                if not brow:
                    continue
                for c, b in brow.items():
                    p = a * b
                    acc[c] = acc[c] + p if c in acc else p
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                rows[r] = acc
        return Operator(self.space, rows)

    def apply(self, v: StateVector) -> StateVector:
        self._check(v)
        out: dict[int, PhaseScalar] = {}
        for r, row in self._rows.items():
            acc = ZERO
            for c, a in row.items():
                if c in v.amplitudes:
                    acc = acc + a * v.amplitudes[c]
            if acc:
                out[r] = acc
        return StateVector(self.space, out)

    def dagger(self) -> Operator:
        rows: Rows = {}
        for r, row in self._rows.items():
            for c, v in row.items():
                rows.setdefault(c, {})[r] = v.conjugate()
        return Operator(self.space, rows)

    def transpose(self) -> Operator:
        rows: Rows = {}
        for r, row in self._rows.items():
            for c, v in row.items():
                rows.setdefault(c, {})[r] = v
        return Operator(self.space, rows)

    def kron(self, other: Operator) -> Operator:
        return kron(self, other)

    def map_scalars(self, f: Callable[[PhaseScalar], PhaseScalar]) -> Operator:
        return Operator(self.space, _prune({r: {c: f(v) for c, v in row.items()} for r, row in self._rows.items()}))

    def with_space(self, space: IndexSpace) -> Operator:
        """Reinterpret the same flat matrix on an equal-dimension factorization."""
        if space.dim != self.dim:
            raise DimensionMismatchError(f"cannot view {self.space} as {space}")
        return Operator(space, self._rows)

    # -- numeric layer and serialization ----------------------------------

    def to_numpy(self, assignment: Mapping[int, float] | None = None) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for r, row in self._rows.items():
            for c, v in row.items():
                out[r, c] = v.evaluate(assignment)
        return out

    def to_json(self, assignment: Mapping[int, float] | None = None, numeric: bool = False) -> dict:
        entries = []
        for r, c, v in self.entries():
            if numeric:
                z = v.evaluate(assignment)
                entries.append({"row": r, "col": c, "scalar": {"re": z.real, "im": z.imag}})
            else:
                entries.append({"row": r, "col": c, "scalar": v.to_json()})
        return {"dim": self.dim, "factors": self.space.to_json(), "entries": entries}

    @classmethod
    def from_json(cls, data: Mapping) -> Operator:
        space = IndexSpace.from_json(data["factors"])
        if space.dim != data["dim"]:
            raise DimensionMismatchError(f"dim {data['dim']} does not match factors {data['factors']}")
        return cls.from_entries(
            space, ((e["row"], e["col"], PhaseScalar.from_json(e["scalar"])) for e in data["entries"])
        )


def _prune(rows: Rows) -> Rows:
    out: Rows = {}
    for r, row in rows.items():
        kept = {c: v for c, v in row.items() if v}
        if kept:
            out[r] = kept
    return out


def kron(a: Operator, b: Operator) -> Operator:
    """(A⊗B)[(i,j),(k,l)] = A[i,k] * B[j,l]; factor lists are concatenated."""
    db = b.dim
    rows: Rows = {}
    for ra, arow in a._rows.items():
        for rb, brow in b._rows.items():
            row = {}
            for ca, va in arow.items():
                for cb, vb in brow.items():
                    row[ca * db + cb] = va * vb
            rows[ra * db + rb] = row
    return Operator(a.space * b.space, _prune(rows))


def pair_factor(a: Operator) -> int:
    """Twice-J of V when ``a`` acts on V⊗V (regrouping qubit factors if needed)."""
    factors = a.space.factors
    if len(factors) == 2 and factors[0] == factors[1]:
        return factors[0]
    if len(factors) % 2 == 0:
        half = len(factors) // 2
        if factors[:half] == factors[half:]:
            return a.space.regroup(2).factors[0]
    raise DimensionMismatchError(f"{a.space} is not of the form V⊗V")


def lift(a: Operator, i: int, n: int) -> Operator:
    """Embed an operator on V⊗V as acting on factors i, i+1 of V^{⊗n} (1-based)."""
    j2 = pair_factor(a)
    if not 1 <= i <= n - 1:
        raise ValueError(f"position {i} out of range for {n} factors")
    d = j2 + 1
    left, right = d ** (i - 1), d ** (n - i - 1)
    block = d * d
    rows: Rows = {}
    for r, arow in a._rows.items():
        for lft in range(left):
            base = lft * block
            for rgt in range(right):
                rows[(base + r) * right + rgt] = {(base + c) * right + rgt: v for c, v in arow.items()}
    return Operator(IndexSpace.spins(j2, n), rows)


def permutation(space: IndexSpace) -> Operator:
    """Swap P = sum |ij><ji| of the two halves of ``space`` (V⊗V, qubits regrouped)."""
    half = len(space.factors) // 2
    if len(space.factors) % 2 or space.factors[:half] != space.factors[half:]:
        raise DimensionMismatchError(f"permutation needs two identical halves, got {space}")
    d = space.regroup(2).dims[0]
    return Operator(space, {i * d + j: {j * d + i: ONE} for i in range(d) for j in range(d)})


def pauli(name: str) -> Operator:
    """Pauli matrices (and ``iy`` for i*sigma_y, which is real) on one qubit."""
    from .scalar import I

    q = IndexSpace.qubits(1)
    table = {
        "i": [[1, 0], [0, 1]],
        "x": [[0, 1], [1, 0]],
        "y": [[0, -I], [I, 0]],
        "z": [[1, 0], [0, -1]],
        "iy": [[0, 1], [-1, 0]],
    }
    return Operator.from_dense(q, table[name])


class StateVector:
    __slots__ = ("space", "amplitudes")

    def __init__(self, space: IndexSpace, amplitudes: Mapping[int, PhaseScalar] | None = None) -> None:
        self.space = space
        self.amplitudes: dict[int, PhaseScalar] = {k: v for k, v in (amplitudes or {}).items() if v}

    @classmethod
    def basis(cls, space: IndexSpace, index: int) -> StateVector:
        return cls(space, {index: ONE})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.space.dim == other.space.dim and self.amplitudes == other.amplitudes

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: StateVector) -> StateVector:
        acc = dict(self.amplitudes)
        for k, v in other.amplitudes.items():
            acc[k] = acc.get(k, ZERO) + v
        return StateVector(self.space, acc)

    def scale(self, s: PhaseScalar | int | Fraction) -> StateVector:
        s = _as_scalar(s)
        return StateVector(self.space, {k: v * s for k, v in self.amplitudes.items()})

    def inner(self, other: StateVector) -> PhaseScalar:
        """<self|other>, conjugate-linear in self."""
        acc = ZERO
        for k, v in self.amplitudes.items():
            w = other.amplitudes.get(k)
            if w is not None:
                acc = acc + v.conjugate() * w
        return acc

    def norm2(self) -> PhaseScalar:
        return self.inner(self)

    def to_numpy(self, assignment: Mapping[int, float] | None = None) -> np.ndarray:
        out = np.zeros(self.space.dim, dtype=complex)
        for k, v in self.amplitudes.items():
            out[k] = v.evaluate(assignment)
        return out

    def to_json(self, assignment: Mapping[int, float] | None = None, numeric: bool = False) -> dict:
        amps = []
        for k in sorted(self.amplitudes):
            v = self.amplitudes[k]
            if numeric:
                z = v.evaluate(assignment)
                amps.append({"index": k, "scalar": {"re": z.real, "im": z.imag}})
            else:
                amps.append({"index": k, "scalar": v.to_json()})
        return {"dim": self.space.dim, "factors": self.space.to_json(), "amplitudes": amps}

    def __repr__(self) -> str:
        return f"StateVector({self.space}, {len(self.amplitudes)} nonzero)"
