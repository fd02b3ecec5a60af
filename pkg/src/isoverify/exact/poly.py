"""Sparse multivariate polynomials with rational coefficients.

A polynomial lives over a declared, ordered tuple of indeterminate names.  Two
polynomials may only be combined when their lists agree; plain ``int`` and
``Fraction`` operands (and polynomials over the empty list) are coerced to
constants.

>>> X = MPoly.var("X")
>>> str((X + 1) * (X - 1))
'X^2 - 1'
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import StructuralError

_SCALARS = (int, Fraction)


def _grlex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


class MPoly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], Fraction] | None = None,
                 vars: Iterable[str] = ()):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise StructuralError(f"bad exponent vector {exps} for {self.vars}")
            if coeff:
                clean[exps] = Fraction(coeff)
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, value, vars: Iterable[str] = ()) -> "MPoly":
        vars = tuple(vars)
        return cls({(0,) * len(vars): Fraction(value)}, vars)

    @classmethod
    def var(cls, name: str, vars: Iterable[str] | None = None) -> "MPoly":
        vars = (name,) if vars is None else tuple(vars)
        if name not in vars:
            raise StructuralError(f"{name!r} is not among {vars}")
        exps = tuple(1 if v == name else 0 for v in vars)
        return cls({exps: Fraction(1)}, vars)

    @classmethod
    def monomial(cls, coeff, exps, vars) -> "MPoly":
        return cls({tuple(exps): Fraction(coeff)}, vars)

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.vars == self.vars:
                return other
            if not other.vars:
                return MPoly.const(other.terms.get((), 0), self.vars)
            if not self.vars:
                raise _Promote(other)
            raise StructuralError(
                f"indeterminate lists differ: {self.vars} vs {other.vars}")
        if isinstance(other, _SCALARS):
            return MPoly.const(other, self.vars)
        return NotImplemented

    def _binary(self, other, fn):
        try:
            o = self._coerce(other)
        except _Promote as promote:
            return fn(MPoly.const(self.terms.get((), 0), promote.target.vars), promote.target)
        if o is NotImplemented:
            return NotImplemented
        return fn(self, o)

    # -- ring operations ----------------------------------------------------
    @staticmethod
    def _add(p, q):
        terms = dict(p.terms)
        for e, c in q.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MPoly(terms, p.vars)

    @staticmethod
    def _mul(p, q):
        terms: dict = {}
        for e1, c1 in p.terms.items():
            for e2, c2 in q.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MPoly(terms, p.vars)

    def __add__(self, other):
        return self._binary(other, MPoly._add)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        return self._binary(other, lambda p, q: MPoly._add(p, -q))

    def __rsub__(self, other):
        return self._binary(other, lambda p, q: MPoly._add(q, -p))

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            if not other:
                return MPoly({}, self.vars)
            return MPoly({e: c * other for e, c in self.terms.items()}, self.vars)
        return self._binary(other, MPoly._mul)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = MPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        """Exact division; raises ``ArithmeticError`` when the quotient is not a polynomial."""
        if isinstance(other, _SCALARS):
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            inv = 1 / Fraction(other)
            return MPoly({e: c * inv for e, c in self.terms.items()}, self.vars)
        return self._binary(other, MPoly._divexact)

    def __rtruediv__(self, other):
        return self._binary(other, lambda p, q: MPoly._divexact(q, p))

    @staticmethod
    def _divexact(p, q):
        if not q.terms:
            raise ZeroDivisionError("polynomial division by zero")
        if q.is_constant():
            return p / q.terms[(0,) * len(q.vars)]
        lead_e, lead_c = q.leading_term()
        quotient: dict = {}
        rem = p
        while rem.terms:
            e, c = rem.leading_term()
            diff = tuple(a - b for a, b in zip(e, lead_e))
            if any(d < 0 for d in diff):
                raise ArithmeticError(f"{q} does not divide {p}")
            coeff = c / lead_c
            quotient[diff] = quotient.get(diff, 0) + coeff
            rem = rem - q * MPoly({diff: coeff}, q.vars)
        return MPoly(quotient, p.vars)

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, _SCALARS):
            return self.is_constant() and self.terms.get((0,) * len(self.vars), 0) == other
        if isinstance(other, MPoly):
            if other.vars != self.vars:
                if not other.vars or not self.vars:
                    return self.is_constant() and other.is_constant() and \
                        self.constant_value() == other.constant_value()
                return False
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ---------------------------------------------------------
    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise StructuralError(f"{self} is not constant")
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``; the zero polynomial has degree -1."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self._index(var)
        return max(e[i] for e in self.terms)

    def coefficient(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def coeffs(self, var: str) -> list[Fraction]:
        """Dense coefficient list of a univariate polynomial, lowest degree first."""
        if self.vars != (var,):
            raise StructuralError(f"{self.vars} is not the single indeterminate {var!r}")
        out = [Fraction(0)] * (self.degree() + 1)
        for (e,), c in self.terms.items():
            out[e] = c
        return out

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise StructuralError(f"{var!r} is not among {self.vars}") from None

    # -- calculus and substitution ------------------------------------------
    def derive(self, var: str) -> "MPoly":
        i = self._index(var)
        terms: dict = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                terms[ne] = terms.get(ne, 0) + c * e[i]
        return MPoly(terms, self.vars)

    def evaluate(self, assignment: Mapping[str, object]) -> "MPoly":
        """Substitute rationals for some indeterminates and drop them from the list."""
        idx = [self._index(v) for v in assignment]
        values = [Fraction(assignment[v]) for v in assignment]
        keep = [i for i in range(len(self.vars)) if i not in idx]
        terms: dict = {}
        for e, c in self.terms.items():
            for i, val in zip(idx, values):
                c = c * val ** e[i]
            ne = tuple(e[i] for i in keep)
            terms[ne] = terms.get(ne, 0) + c
        return MPoly(terms, tuple(self.vars[i] for i in keep))

    def __call__(self, **values) -> Fraction:
        return self.evaluate(values).constant_value()

    def map_coefficients(self, fn) -> "MPoly":
        return MPoly({e: fn(c) for e, c in self.terms.items()}, self.vars)

    # -- printing -----------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            mag = abs(c)
            if not mono:
                body = _fmt(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_fmt(mag)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MPoly({str(self)!r}, vars={self.vars})"

    @classmethod
    def parse(cls, text: str, vars: Iterable[str]) -> "MPoly":
        """Inverse of ``str`` for the canonical format."""
        vars = tuple(vars)
        text = text.strip()
        if text == "0":
            return cls({}, vars)
        tokens = re.split(r"\s+([+-])\s+", text)
        signs = ["+"] + tokens[1::2]
        bodies = tokens[0::2]
        if bodies[0].startswith("-"):
            signs[0], bodies[0] = "-", bodies[0][1:]
        result = cls({}, vars)
        for sign, body in zip(signs, bodies):
            coeff = Fraction(1)
            exps = [0] * len(vars)
            for factor in body.split("*"):
                if re.fullmatch(r"\d+(/\d+)?", factor):
                    coeff *= Fraction(factor)
                    continue
                name, _, power = factor.partition("^")
                if name not in vars:
                    raise StructuralError(f"unknown indeterminate {name!r}")
                exps[vars.index(name)] += int(power) if power else 1
            result = result + cls({tuple(exps): -coeff if sign == "-" else coeff}, vars)
        return result


def _fmt(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


class _Promote(Exception):
    """Internal signal: a constant over the empty list meets a real polynomial."""

    def __init__(self, target):
        self.target = target


def poly_arith(p: MPoly, q, op: str, var: str | None = None, value=None) -> MPoly:
    """Dispatch helper mirroring the documented operation table.

    ``op`` is one of ``add``, ``mul``, ``derive`` (uses ``var``), ``eval``
    (substitutes ``var -> value``).  ``q`` is ignored for the unary ops.
    """
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    if op == "derive":
        return p.derive(var)
    if op == "eval":
        return p.evaluate({var: value})
    raise ValueError(f"unknown polynomial operation {op!r}")
