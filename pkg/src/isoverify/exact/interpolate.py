from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import StructuralError
from .poly import MPoly


def lagrange_interpolate(samples: Sequence[tuple], var: str = "n") -> MPoly:
    """Unique polynomial of degree < len(samples) through the given (node, value) pairs."""
    if not samples:
        raise StructuralError("interpolation needs at least one sample")
    nodes = [Fraction(x) for x, _ in samples]
    if len(set(nodes)) != len(nodes):
        raise StructuralError("duplicate interpolation node")
    t = MPoly.var(var)
    result = MPoly.const(0, (var,))
    for i, (xi, (_, yi)) in enumerate(zip(nodes, samples)):
        basis = MPoly.const(Fraction(yi), (var,))
        for j, xj in enumerate(nodes):
            if j != i:
                basis = basis * (t - xj) / (xi - xj)
        result = result + basis
    return result
