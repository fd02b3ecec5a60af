"""Rationals are :class:`fractions.Fraction`; this module adds parsing and the
``"p/q"`` wire format."""

from __future__ import annotations

import operator
import re
from fractions import Fraction

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")

_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; the result is always reduced."""
    match = _RATIONAL_RE.match(str(text))
    if not match:
        raise ValueError(f"malformed rational: {text!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(value) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rat_arith(a, b, op: str) -> Fraction:
    """Exact binary operation on rationals.

    Division by zero raises :class:`ZeroDivisionError` (an ``ArithmeticError``).
    """
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown rational operation {op!r}") from None
    return fn(Fraction(a), Fraction(b))


def rational_sqrt(value) -> Fraction | None:
    """Exact square root of a non-negative rational, or ``None`` if irrational."""
    from math import isqrt

    value = Fraction(value)
    if value < 0:
        return None
    p, q = value.numerator, value.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None
