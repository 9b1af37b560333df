"""Exact rational parsing and formatting.

All numeric quantities in this library are `fractions.Fraction` values;
nothing is ever rounded.  Game files carry rationals as strings like
``"3/19"`` (or ``"2"`` for integers), and JSON integers are accepted as
exact values.  Floats are rejected: they cannot represent the tie cases
that equilibrium conditions hinge on.
"""

from __future__ import annotations

from fractions import Fraction


class RationalParseError(ValueError):
    """Raised when a value cannot be read as an exact rational."""


def parse_rational(value: object) -> Fraction:
    """Read an exact rational from a JSON-ish value.

    Accepts ``"p/q"`` and ``"p"`` strings, ints, and Fractions.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise RationalParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise RationalParseError(f"bad rational string {value!r}: {exc}") from None
    if isinstance(value, float):
        raise RationalParseError(
            f"float {value!r} rejected: encode rationals as 'p/q' strings"
        )
    raise RationalParseError(f"not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    """Canonical string form: ``"p/q"``, or ``"p"`` when the value is integral."""
    return str(value)
