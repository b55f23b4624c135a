"""Exact parsing and formatting of rational numbers."""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from numbers import Rational


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions, ``"p/q"`` or decimal strings, and floats exactly.

    Floats go through their shortest decimal repr, so ``0.1`` becomes ``1/10``
    rather than the binary expansion.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rational values")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(Decimal(repr(value)))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational string")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def fmt(q: Fraction) -> str:
    """``p/q`` form, or just ``p`` for integers."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def approx(q: Fraction, digits: int = 12) -> str:
    """Decimal approximation to ``digits`` significant digits."""
    q = Fraction(q)
    if q == 0:
        return "0"
    d = Decimal(q.numerator) / Decimal(q.denominator)
    return f"{d:.{digits}g}"
