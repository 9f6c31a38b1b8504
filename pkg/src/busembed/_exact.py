"""Exact number handling shared by every module.

Coordinates are kept as ``int`` when integral and as ``fractions.Fraction``
otherwise, so all geometric predicates compare exactly.
"""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Union

Exact = Union[int, Fraction]


def exact(value) -> Exact:
    """Convert ``value`` to an exact rational, normalised to ``int`` when integral.

    Floats are read through their shortest ``repr`` so that ``0.1`` becomes 1/10.
    Strings may be integers, decimals or ``"p/q"``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        fr = value
    elif isinstance(value, Rational):
        fr = Fraction(value.numerator, value.denominator)
    elif isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite coordinate {value!r}")
        fr = Fraction(repr(value))
    elif isinstance(value, (Decimal, str)):
        try:
            fr = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    else:
        raise TypeError(f"unsupported coordinate type {type(value).__name__}")
    return fr.numerator if fr.denominator == 1 else fr


def denominator(value: Exact) -> int:
    return 1 if isinstance(value, int) else value.denominator


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def to_json_number(value: Exact) -> Union[int, float, str]:
    """Shortest exact JSON representation: int, a float whose repr is exact, or ``"p/q"``."""
    value = exact(value)
    if isinstance(value, int):
        return value
    approx = float(value)
    if Fraction(repr(approx)) == value:
        return approx
    return f"{value.numerator}/{value.denominator}"


def decimal_text(value: Exact) -> str:
    """Exact decimal text when the value terminates, else a 17-digit approximation."""
    value = exact(value)
    if isinstance(value, int):
        return str(value)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return repr(float(value))
    digits = max(twos, fives)
    scaled = value * 10**digits
    text = str(abs(scaled.numerator))
    text = text.rjust(digits + 1, "0")
    text = (text[:-digits] + "." + text[-digits:]).rstrip("0").rstrip(".")
    return "-" + text if value < 0 else text
