from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def as_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float.

    Floats go through ``repr`` so ``0.1`` becomes ``1/10`` rather than the
    nearest binary double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value).strip())
