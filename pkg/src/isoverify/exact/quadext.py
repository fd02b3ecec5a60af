"""Elements a + b*mu of a quadratic extension with mu^2 = d, d rational.

Components are ``Fraction`` or ``MPoly``.  When ``d`` is the square of a
rational the generator is replaced by that root on construction, so ``b`` is
always zero in the split case.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import StructuralError
from .poly import MPoly
from .rational import rational_sqrt

_BASE = (int, Fraction, MPoly)


class QuadExt:
    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=Fraction(-1)):
        d = Fraction(d)
        a = Fraction(a) if isinstance(a, int) else a
        b = Fraction(b) if isinstance(b, int) else b
        root = rational_sqrt(d)
        if root is not None and b:
            a, b = a + b * root, Fraction(0)
        self.a, self.b, self.d = a, b, d

    @classmethod
    def mu(cls, d) -> "QuadExt":
        return cls(0, 1, d)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise StructuralError(f"extensions differ: mu^2={self.d} vs {other.d}")
            return other
        if isinstance(other, _BASE):
            return QuadExt(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a * o.a + self.d * self.b * o.b,
                       self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = QuadExt(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self):
        """(a + b mu)(a - b mu) = a^2 - d b^2, an element of the base ring."""
        return self.a * self.a - self.d * self.b * self.b

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o:
            raise ZeroDivisionError("division by zero in quadratic extension")
        if not o.b:
            return QuadExt(self.a / o.a, self.b / o.a, self.d)
        num = self * o.conj()
        den = o.norm()
        return QuadExt(num.a / den, num.b / den, self.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except StructuralError:
            return False
        if o is NotImplemented:
            return o
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __str__(self):
        if not self.b:
            return str(self.a)
        a = "" if not self.a else f"{self.a} + "
        return f"{a}({self.b})*mu"

    def __repr__(self):
        return f"QuadExt({self.a!s}, {self.b!s}, mu^2={self.d})"
