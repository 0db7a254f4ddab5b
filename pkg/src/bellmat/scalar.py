"""Exact scalars in Q(zeta_8)[u_l, 1/u_l].

A :class:`PhaseScalar` is a finite sum of terms ``c * zeta8**r * prod(u_l**e_l)``
with ``c`` rational, ``r`` in ``0..3`` and ``u_l = exp(i phi_l / 2)`` a formal
unit-modulus symbol attached to a positive half-integer label ``l``.  Labels are
stored as twice-values (``u[1/2]`` has id ``1``).  Negative labels never appear:
``u_{-l}`` is represented as ``u_l**-1``.

The powers ``1, zeta8, zeta8**2, zeta8**3`` form a Q-basis of Q(zeta_8), and
Laurent monomials in independent symbols are linearly independent, so two
scalars are equal exactly when their canonical term maps coincide.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Iterable, Mapping
from fractions import Fraction
from typing import Union

from .halfint import format_half, parse_half

Mono = tuple[tuple[int, int], ...]
Key = tuple[int, Mono]
Number = Union[int, Fraction]

_H = math.sqrt(0.5)
_ZETA_POWERS = [1 + 0j, complex(_H, _H), 1j, complex(-_H, _H)]


class MissingAssignmentError(KeyError):
    """Raised when a phase symbol has no angle during numeric evaluation."""


def _reduce_zeta(r: int) -> tuple[int, int]:
    """Return (sign, r') with zeta8**r == sign * zeta8**r' and 0 <= r' < 4."""
    r %= 8
    if r >= 4:
        return -1, r - 4
    return 1, r


def _mono_from(raw: Mapping[int, int] | Iterable[tuple[int, int]] | None) -> Mono:
    if not raw:
        return ()
    items = raw.items() if isinstance(raw, Mapping) else raw
    acc: dict[int, int] = {}
    for sym, e in items:
        if sym <= 0:
            raise ValueError(f"phase symbol ids are positive twice-labels, got {sym}")
        acc[sym] = acc.get(sym, 0) + e
    return tuple(sorted((s, e) for s, e in acc.items() if e))


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for s, e in b:
        acc[s] = acc.get(s, 0) + e
    return tuple(sorted((s, e) for s, e in acc.items() if e))


def _mono_inv(a: Mono) -> Mono:
    return tuple((s, -e) for s, e in a)


class PhaseScalar:
    """Immutable exact scalar; see the module docstring for the encoding."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, Fraction] | None = None) -> None:
        # Callers inside this module pass canonical maps; use from_terms otherwise.
        self._terms: dict[Key, Fraction] = dict(terms) if terms else {}
        self._hash: int | None = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_terms(cls, raw: Iterable[tuple[Number, int, Mapping[int, int] | Mono | None]]) -> PhaseScalar:
        """Normalize a raw term list ``(coeff, zeta8_power, monomial)``."""
        acc: dict[Key, Fraction] = {}
        for coeff, r, mono in raw:
            sign, r = _reduce_zeta(r)
            key = (r, _mono_from(mono))
            acc[key] = acc.get(key, 0) + sign * Fraction(coeff)
        return cls({k: v for k, v in acc.items() if v})

    @classmethod
    def rational(cls, value: Number) -> PhaseScalar:
        value = Fraction(value)
        return cls({(0, ()): value}) if value else cls()

    @classmethod
    def zeta(cls, power: int = 1) -> PhaseScalar:
        sign, r = _reduce_zeta(power)
        return cls({(r, ()): Fraction(sign)})

    @classmethod
    def u(cls, label2: int, exponent: int = 1) -> PhaseScalar:
        """The phase symbol ``u_l**exponent``; a negative label gives the inverse."""
        if label2 == 0 or label2 % 2 == 0:
            raise ValueError("phase symbols live on half-odd-integer labels")
        if label2 < 0:
            label2, exponent = -label2, -exponent
        if exponent == 0:
            return ONE
        return cls({(0, ((label2, exponent),)): Fraction(1)})

    @classmethod
    def coerce(cls, value: PhaseScalar | Number) -> PhaseScalar:
        if isinstance(value, PhaseScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.rational(value)
        return NotImplemented

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[Key, Fraction]:
        return dict(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def symbols(self) -> set[int]:
        return {s for (_, mono) in self._terms for s, _ in mono}

    def is_rational(self) -> bool:
        return all(k == (0, ()) for k in self._terms)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._terms.get((0, ()), Fraction(0))

    def is_monomial(self) -> bool:
        """True when every term carries the same u-monomial (a field element times a unit)."""
        return len({mono for _, mono in self._terms}) == 1

    # -- ring operations --------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PhaseScalar.rational(other)
        if not isinstance(other, PhaseScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> PhaseScalar:
        return PhaseScalar({k: -v for k, v in self._terms.items()})

    def __add__(self, other: PhaseScalar | Number) -> PhaseScalar:
        other = PhaseScalar.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        acc = dict(self._terms)
        for k, v in other._terms.items():
            s = acc.get(k)
            if s is None:
                acc[k] = v
            else:
                s += v
                if s:
                    acc[k] = s
                else:
                    del acc[k]
        return PhaseScalar(acc)

    __radd__ = __add__

    def __sub__(self, other: PhaseScalar | Number) -> PhaseScalar:
        other = PhaseScalar.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Number) -> PhaseScalar:
        return PhaseScalar.coerce(other) - self

    def __mul__(self, other: PhaseScalar | Number) -> PhaseScalar:
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return PhaseScalar({k: v * other for k, v in self._terms.items()})
        if not isinstance(other, PhaseScalar):
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        if other._terms == _ONE_TERMS:
            return self
        if self._terms == _ONE_TERMS:
            return other
        acc: dict[Key, Fraction] = {}
        for (r1, m1), c1 in self._terms.items():
            for (r2, m2), c2 in other._terms.items():
                r = r1 + r2
                c = c1 * c2
                if r >= 4:
                    r -= 4
                    c = -c
                key = (r, _mono_mul(m1, m2))
                s = acc.get(key)
                acc[key] = c if s is None else s + c
        return PhaseScalar({k: v for k, v in acc.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other: PhaseScalar | Number) -> PhaseScalar:
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __pow__(self, n: int) -> PhaseScalar:
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> PhaseScalar:
        """Complex conjugation: zeta8 -> zeta8**-1 and u_l -> u_l**-1."""
        acc: dict[Key, Fraction] = {}
        for (r, mono), c in self._terms.items():
            sign, r2 = _reduce_zeta(-r)
            acc[(r2, _mono_inv(mono))] = sign * c
        return PhaseScalar(acc)

    def galois(self, k: int) -> PhaseScalar:
        """Apply the automorphism zeta8 -> zeta8**k (k odd) to the coefficients."""
        if k % 2 == 0:
            raise ValueError("Galois exponent must be odd")
        return PhaseScalar.from_terms((c, r * k, mono) for (r, mono), c in self._terms.items())

    def inverse(self) -> PhaseScalar:
        """Multiplicative inverse; defined for (nonzero field element) * (u-monomial)."""
        if not self._terms:
            raise ZeroDivisionError("inverse of zero")
        monos = {mono for _, mono in self._terms}
        if len(monos) != 1:
            raise ValueError(f"{self} is not invertible in the Laurent phase ring")
        (mono,) = monos
        field = PhaseScalar({(r, ()): c for (r, _), c in self._terms.items()})
        conj_prod = field.galois(3) * field.galois(5) * field.galois(7)
        norm = (field * conj_prod).rational_value()
        return conj_prod * (1 / norm) * PhaseScalar({(0, _mono_inv(mono)): Fraction(1)})

    def substitute(self, units: Mapping[int, PhaseScalar]) -> PhaseScalar:
        """Replace phase symbols ``u_l`` by the given scalars (must be invertible)."""
        out = ZERO
        for (r, mono), c in self._terms.items():
            term = PhaseScalar({(r, ()): c})
            rest: list[tuple[int, int]] = []
            for s, e in mono:
                if s in units:
                    term = term * units[s] ** e
                else:
                    rest.append((s, e))
            if rest:
                term = term * PhaseScalar({(0, tuple(rest)): Fraction(1)})
            out = out + term
        return out

    def evaluate(self, assignment: Mapping[int, float] | None = None) -> complex:
        """Numeric value with ``u_l = exp(i*phi_l/2)`` and ``zeta8 = exp(i*pi/4)``."""
        assignment = assignment or {}
        total = 0j
        for (r, mono), c in self._terms.items():
            value = float(c) * _ZETA_POWERS[r]
            if mono:
                angle = 0.0
                for s, e in mono:
                    try:
                        angle += e * assignment[s] / 2
                    except KeyError:
                        raise MissingAssignmentError(
                            f"no angle assigned to phase symbol u[{format_half(s)}]"
                        ) from None
                value *= cmath.exp(1j * angle)
            total += value
        return total

    # -- serialization and display ----------------------------------------

    def _sorted_items(self) -> list[tuple[Key, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))

    def to_json(self) -> list[dict]:
        return [
            {
                "coeff": [c.numerator, c.denominator],
                "zeta8": r,
                "umono": {format_half(s): e for s, e in mono},
            }
            for (r, mono), c in self._sorted_items()
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> PhaseScalar:
        return cls.from_terms(
            (
                Fraction(t["coeff"][0], t["coeff"][1]),
                int(t["zeta8"]),
                {parse_half(k): int(e) for k, e in t.get("umono", {}).items()},
            )
            for t in data
        )

    def __repr__(self) -> str:
        return f"PhaseScalar({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        by_mono: dict[Mono, list[Fraction]] = {}
        for (r, mono), c in self._terms.items():
            by_mono.setdefault(mono, [Fraction(0)] * 4)[r] += c
        parts = []
        for mono in sorted(by_mono):
            a, b, c, d = by_mono[mono]
            # zeta = (sqrt2 + i sqrt2)/2, zeta^3 = (-sqrt2 + i sqrt2)/2
            pieces = [(a, ""), (c, "i"), ((b - d) / 2, "√2"), ((b + d) / 2, "i√2")]
            field = _format_pieces(pieces)
            umono = "·".join(
                f"u[{format_half(s)}]" + (f"^{e}" if e != 1 else "") for s, e in mono
            )
            if not umono:
                parts.append(field)
            elif field == "1":
                parts.append(umono)
            elif field == "-1":
                parts.append("-" + umono)
            else:
                parts.append(f"({field})·{umono}")
        return " + ".join(parts)


def _format_pieces(pieces: list[tuple[Fraction, str]]) -> str:
    out = []
    for coeff, unit in pieces:
        if not coeff:
            continue
        if unit and abs(coeff) == 1:
            text = unit
        elif unit:
            text = f"{abs(coeff)}{unit}"
        else:
            text = str(abs(coeff))
        sign = "-" if coeff < 0 else "+"
        out.append((sign, text))
    if not out:
        return "0"
    first_sign, first = out[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, text in out[1:]:
        s += f" {sign} {text}"
    return s


_ONE_TERMS = {(0, ()): Fraction(1)}

ZERO = PhaseScalar()
ONE = PhaseScalar.rational(1)
ZETA8 = PhaseScalar.zeta(1)
I = PhaseScalar.zeta(2)
SQRT2 = ZETA8 - PhaseScalar.zeta(3)
INV_SQRT2 = SQRT2 * Fraction(1, 2)
# eigenvalues of the Bell matrix: lambda_+ = exp(-i pi/4), lambda_- = exp(i pi/4)
LAMBDA_PLUS = PhaseScalar.zeta(-1)
LAMBDA_MINUS = PhaseScalar.zeta(1)
