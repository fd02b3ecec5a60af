"""Dense exact matrices over Fraction, MPoly or QuadExt entries.

Only what the verification suites need: products and powers, slicing,
fraction-free determinants and ranks, and Gaussian elimination over fields.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Mapping, Sequence

from ..errors import StructuralError
from .poly import MPoly
from .rational import format_rational, parse_rational


def _norm(x):
    return Fraction(x) if isinstance(x, int) else x


class Matrix:
    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable]):
        grid = [[_norm(x) for x in row] for row in data]
        if not grid or not grid[0]:
            raise StructuralError("matrix must have at least one row and column")
        width = len(grid[0])
        if any(len(r) != width for r in grid):
            raise StructuralError("ragged matrix rows")
        self.rows, self.cols = len(grid), width
        self._data = grid

    # -- construction -------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int, zero=Fraction(0)) -> "Matrix":
        return cls([[zero] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int, one=Fraction(1), zero=Fraction(0)) -> "Matrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        return cls(rows)

    @classmethod
    def block(cls, blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        out = []
        for brow in blocks:
            for i in range(brow[0].rows):
                out.append([x for b in brow for x in b.row(i)])
        return cls(out)

    # -- access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> list:
        return list(self._data[i])

    def col(self, j: int) -> list:
        return [r[j] for r in self._data]

    def tolist(self) -> list[list]:
        return [list(r) for r in self._data]

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- algebra ------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for ra, rb in zip(self._data, other._data) for a, b in zip(ra, rb))

    __hash__ = None

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([[a + b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self._data, other._data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([[a - b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self._data, other._data)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def scale(self, s) -> "Matrix":
        return self.map(lambda x: x * s)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise StructuralError(f"shape mismatch {self.shape} vs {other.shape}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise StructuralError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.col(j) for j in range(other.cols)]
        out = []
        for r in self._data:
            out.append([_dot(r, c) for c in cols])
        return Matrix(out)

    def vecmul(self, v: Sequence) -> list:
        """Row vector times matrix, ``v @ self``."""
        if len(v) != self.rows:
            raise StructuralError("vector length does not match row count")
        return [_dot(v, self.col(j)) for j in range(self.cols)]

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise StructuralError("power of a non-square matrix")
        one = _one_like(self._data[0][0])
        result = Matrix.identity(self.rows, one, one * 0)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    @property
    def T(self) -> "Matrix":
        return Matrix([self.col(j) for j in range(self.cols)])

    def map(self, fn: Callable) -> "Matrix":
        return Matrix([[fn(x) for x in r] for r in self._data])

    # -- slicing ------------------------------------------------------------
    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self._data[i][j] for j in cols] for i in rows])

    def minor(self, i: int, j: int) -> "Matrix":
        return self.submatrix([r for r in range(self.rows) if r != i],
                              [c for c in range(self.cols) if c != j])

    def drop_columns(self, cols: Iterable[int]) -> "Matrix":
        drop = set(cols)
        return self.submatrix(range(self.rows), [j for j in range(self.cols) if j not in drop])

    def replace_column(self, j: int, column: Sequence) -> "Matrix":
        if len(column) != self.rows:
            raise StructuralError("replacement column has wrong length")
        data = self.tolist()
        for i, x in enumerate(column):
            data[i][j] = x
        return Matrix(data)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise StructuralError("hstack needs equal row counts")
        return Matrix([a + b for a, b in zip(self.tolist(), other.tolist())])

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise StructuralError("vstack needs equal column counts")
        return Matrix(self.tolist() + other.tolist())

    def evaluate(self, assignment: Mapping[str, object]) -> "Matrix":
        """Substitute rationals into MPoly entries; constants collapse to Fraction."""
        def ev(x):
            if isinstance(x, MPoly):
                y = x.evaluate({k: v for k, v in assignment.items() if k in x.vars})
                return y.constant_value() if y.is_constant() else y
            return x
        return self.map(ev)

    # -- serialisation ------------------------------------------------------
    def to_json(self) -> str:
        return json.dumps([[_entry_str(x) for x in r] for r in self._data])

    @classmethod
    def from_json(cls, text: str, vars: Sequence[str] | None = None) -> "Matrix":
        grid = json.loads(text)
        if vars is None:
            return cls([[parse_rational(x) for x in r] for r in grid])
        return cls([[MPoly.parse(x, vars) for x in r] for r in grid])

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self._data)
        return f"Matrix([{body}])"


def _entry_str(x) -> str:
    if isinstance(x, Fraction):
        return format_rational(x)
    return str(x)


def _one_like(x):
    if isinstance(x, MPoly):
        return MPoly.const(1, x.vars)
    return Fraction(1)


def _dot(u, v):
    total = None
    for a, b in zip(u, v):
        if not a or not b:
            continue
        term = a * b
        total = term if total is None else total + term
    if total is None:
        return u[0] * 0 if u else Fraction(0)
    return total


# -- determinants -----------------------------------------------------------

def bareiss_det(A: Matrix):
    """Fraction-free determinant; every division by the previous pivot is exact."""
    if not A.is_square():
        raise StructuralError(f"determinant of non-square {A.shape} matrix")
    a = A.tolist()
    n = A.rows
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if not a[k][k]:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return a[0][0] * 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = pivot * a[i][j] - aik * a[k][j]
                a[i][j] = num / prev if prev != 1 else num
            a[i][k] = pivot * 0
        prev = pivot
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def det(A: Matrix):
    return bareiss_det(A)


# -- rank -------------------------------------------------------------------

def _ground(A: Matrix, assignment: Mapping[str, object] | None) -> list[list[Fraction]]:
    grid = []
    for r in A.tolist():
        row = []
        for x in r:
            if isinstance(x, MPoly):
                y = x.evaluate({k: v for k, v in (assignment or {}).items() if k in x.vars})
                if not y.is_constant():
                    raise StructuralError(f"entry {x} is not grounded by the assignment")
                x = y.constant_value()
            elif not isinstance(x, Fraction):
                raise StructuralError(f"rank needs rational entries, got {type(x).__name__}")
            row.append(x)
        grid.append(row)
    return grid


def exact_rank(A: Matrix, assignment: Mapping[str, object] | None = None) -> int:
    """Rank over the rationals by fraction-free elimination on integer rows.

    Pivots are taken as the first nonzero entry in column order.
    """
    grid = _ground(A, assignment)
    rows = []
    for r in grid:
        den = lcm(*(x.denominator for x in r)) if r else 1
        rows.append([int(x * den) for x in r])
    rank = 0
    ncols = A.cols
    for c in range(ncols):
        pivot_row = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        p = rows[rank]
        for i in range(rank + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [p[c] * x - f * y for x, y in zip(rows[i], p)]
        rank += 1
        if rank == len(rows):
            break
    return rank


# -- elimination over fields ------------------------------------------------

def row_echelon(A: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over a field (Fraction or QuadExt entries)."""
    a = A.tolist()
    pivots: list[int] = []
    r = 0
    for c in range(A.cols):
        p = next((i for i in range(r, A.rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(A.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == A.rows:
            break
    return a, pivots


def field_rank(A: Matrix) -> int:
    return len(row_echelon(A)[1])


def nullspace(A: Matrix) -> list[list]:
    """Basis of {x : A x = 0}, one vector per free column, free entry set to 1."""
    rref, pivots = row_echelon(A)
    zero = A[0, 0] * 0
    one = zero + 1
    basis = []
    for free in (j for j in range(A.cols) if j not in pivots):
        v = [zero] * A.cols
        v[free] = one
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][free]
        basis.append(v)
    return basis


def solve(A: Matrix, b: Sequence) -> list:
    """Unique solution of A x = b over a field; raises if singular or inconsistent."""
    if len(b) != A.rows:
        raise StructuralError("right-hand side has wrong length")
    aug = A.hstack(Matrix([[x] for x in b]))
    rref, pivots = row_echelon(aug)
    if A.cols in pivots:
        raise ArithmeticError("inconsistent linear system")
    if len(pivots) != A.cols:
        raise ArithmeticError("linear system has no unique solution")
    return [rref[i][A.cols] for i in range(A.cols)]
