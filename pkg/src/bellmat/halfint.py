"""Half-integer helpers.

Spin labels are stored as *twice* their value so that they stay plain ints:
the label 3/2 is the int 3, -1/2 is -1.
"""

from __future__ import annotations

from fractions import Fraction


def parse_half(text: str | int | Fraction) -> int:
    """Parse ``"3/2"``, ``"1/2"``, ``2`` ... into a twice-value integer."""
    value = Fraction(text) if not isinstance(text, Fraction) else text
    twice = value * 2
    if twice.denominator != 1:
        raise ValueError(f"{text!r} is not a half-integer")
    return int(twice)


def format_half(twice: int) -> str:
    if twice % 2 == 0:
        return str(twice // 2)
    return f"{twice}/2"


def eps(twice: int) -> int:
    """Step function on nonzero labels: +1 for positive, -1 for negative."""
    if twice == 0:
        raise ValueError("step function is only defined on nonzero half-odd labels")
    return 1 if twice > 0 else -1


def spin_labels(j2: int) -> list[int]:
    """Labels J, J-1, ..., -J of a spin-J factor, as twice-values."""
    return list(range(j2, -j2 - 1, -2))


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0
