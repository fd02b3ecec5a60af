"""The tau-Kac matrix K, the block matrix Q built from it, and their spectra.

Everything is exact.  Entries live either over the rationals (for a concrete
tau) or as polynomials in the single indeterminate ``X`` standing for c*tau^2,
which is how the recurrence tables use them.  Vectors are rows multiplied on
the left, ``v @ Q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import ParameterError, VerificationError
from .exact import Matrix, MPoly, QuadExt, bareiss_det, exact_rank, nullspace, solve


@dataclass(frozen=True)
class SpaceFormParams:
    n: int
    m: int
    c: int
    tau: Fraction

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ParameterError(f"n must be an integer >= 2, got {self.n!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise ParameterError(f"m must be an integer >= 1, got {self.m!r}")
        if self.c not in (-1, 1):
            raise ParameterError(f"c must be -1 or +1, got {self.c!r}")
        tau = Fraction(self.tau)
        if not 0 < tau < 1:
            raise ParameterError(f"tau must lie in (0,1), got {tau}")
        object.__setattr__(self, "tau", tau)

    @property
    def X(self) -> Fraction:
        """The value of c*tau^2."""
        return self.c * self.tau ** 2

    @property
    def mu_sq(self) -> Fraction:
        """mu^2 = -c*tau^2; the eigenvalues of K are (n-1-2l)*mu."""
        return -self.X

    @property
    def size(self) -> int:
        return (self.m + 1) * self.n

    def as_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "c": self.c, "tau": str(self.tau)}


def _kac_entries(n: int, X) -> list[list]:
    zero = X * 0
    rows = [[zero] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = zero + (i + 1)
        rows[i + 1][i] = -(n - 1 - i) * X
    return rows


def build_kac(params: SpaceFormParams) -> Matrix:
    """n x n tridiagonal matrix: superdiagonal 1..n-1, subdiagonal -(n-1)c tau^2 .. -c tau^2."""
    return Matrix(_kac_entries(params.n, params.X))


def kac_symbolic(n: int) -> Matrix:
    """K with c*tau^2 kept as the indeterminate X."""
    if n < 2:
        raise ParameterError("n must be >= 2")
    return Matrix(_kac_entries(n, MPoly.var("X")))


def _q_from_kac(K: Matrix, m: int) -> Matrix:
    n = K.rows
    zero = K[0, 0] * 0
    blank = Matrix.zeros(n, n, zero)
    blocks = []
    for p in range(m + 1):
        row = []
        for q in range(m + 1):
            if q == p:
                row.append(K)
            elif q == p + 1:
                row.append(Matrix.identity(n, zero + (p + 1), zero))
            else:
                row.append(blank)
        blocks.append(row)
    return Matrix.block(blocks)


def build_q(params: SpaceFormParams) -> Matrix:
    """Block upper bidiagonal: K on the diagonal, 1*I, 2*I, ..., m*I above it."""
    return _q_from_kac(build_kac(params), params.m)


@lru_cache(maxsize=None)
def q_symbolic(n: int, m: int) -> Matrix:
    return _q_from_kac(kac_symbolic(n), m)


def _rising(p: int, d: int) -> int:
    out = 1
    for i in range(d):
        out *= p + i
    return out


def q_power_closed(params: SpaceFormParams, j: int) -> Matrix:
    """Q^j from the block closed form binom(j,d) p^(rising d) K^(j-d) on block (p, p+d)."""
    if j < 0:
        raise ParameterError("power must be non-negative")
    n, m = params.n, params.m
    K = build_kac(params)
    kpow = [Matrix.identity(n)]
    for _ in range(j):
        kpow.append(kpow[-1] @ K)
    blank = Matrix.zeros(n, n)
    blocks = []
    for p in range(1, m + 2):
        row = []
        for q in range(1, m + 2):
            d = q - p
            if d < 0 or d > j:
                row.append(blank)
            else:
                row.append(kpow[j - d].scale(comb(j, d) * _rising(p, d)))
        blocks.append(row)
    return Matrix.block(blocks)


def charpoly_kac(params: SpaceFormParams) -> MPoly:
    """det(lam*I - K), cross-checked against the product over the predicted spectrum."""
    n = params.n
    lam = MPoly.var("lam")
    K = build_kac(params)
    A = Matrix([[(lam if i == j else lam * 0) - K[i, j] for j in range(n)] for i in range(n)])
    chi = bareiss_det(A)
    expected = predicted_charpoly(params)
    if expected.b or expected.a != chi:
        raise VerificationError(
            f"characteristic polynomial {chi} differs from spectral product {expected}",
            witness={"charpoly": str(chi), "product": str(expected)})
    return chi


def predicted_charpoly(params: SpaceFormParams) -> QuadExt:
    """prod_l (lam - (n-1-2l) mu) with mu^2 = -c tau^2, components polynomial in lam."""
    lam = MPoly.var("lam")
    prod = QuadExt(MPoly.const(1, ("lam",)), MPoly.const(0, ("lam",)), params.mu_sq)
    for lval in eigenvalues(params):
        prod = prod * (QuadExt(lam, MPoly.const(0, ("lam",)), params.mu_sq) - lval)
    return prod


def eigenvalues(params: SpaceFormParams) -> list[QuadExt]:
    mu = QuadExt.mu(params.mu_sq)
    return [mu * (params.n - 1 - 2 * l) for l in range(params.n)]


def kac_rank(params: SpaceFormParams) -> int:
    r = exact_rank(build_kac(params))
    expected = params.n if params.n % 2 == 0 else params.n - 1
    if r != expected:
        raise VerificationError(f"rank K = {r}, expected {expected}",
                                witness={"rank": r, "expected": expected})
    return r


def _lift(M: Matrix, d) -> Matrix:
    return M.map(lambda x: QuadExt(x, 0, d))


def left_eigenvectors(params: SpaceFormParams) -> list[list[QuadExt]]:
    """Row vectors x_l with x_l K = lambda_l x_l; first nonzero coordinate equal to 1."""
    d = params.mu_sq
    KT = _lift(build_kac(params), d).T
    n = params.n
    vecs = []
    for lval in eigenvalues(params):
        shifted = Matrix([[KT[i, j] - (lval if i == j else 0) for j in range(n)] for i in range(n)])
        basis = nullspace(shifted)
        if len(basis) != 1:
            raise VerificationError(f"eigenvalue {lval} has geometric multiplicity {len(basis)}")
        v = basis[0]
        lead = next(x for x in v if x)
        vecs.append([x / lead for x in v])
    return vecs


def e1_eigen_coordinates(params: SpaceFormParams) -> list[QuadExt]:
    """Coefficients a_l with e_1 = sum_l a_l x_l over the left eigenbasis; all must be nonzero."""
    vecs = left_eigenvectors(params)
    n = params.n
    d = params.mu_sq
    basis_cols = Matrix([[vecs[l][i] for l in range(n)] for i in range(n)])
    e1 = [QuadExt(1 if i == 0 else 0, 0, d) for i in range(n)]
    coords = solve(basis_cols, e1)
    zeros = [l for l, a in enumerate(coords) if not a]
    if zeros:
        raise VerificationError(f"e1 has zero coordinate along eigenvectors {zeros}",
                                witness={"zero_indices": zeros})
    return coords


def eigenvector_relation_residual(params: SpaceFormParams) -> list[tuple[int, int]]:
    """Check x_{i,l} Q = lam_l x_{i,l} + (i+1) x_{i+1,l} on lifted eigenvectors.

    The factor (i+1) comes from the (i+1)*I block above the diagonal.  Returns
    the (i, l) pairs where the relation fails; empty means verified.
    """
    d = params.mu_sq
    Q = _lift(build_q(params), d)
    n, m = params.n, params.m
    zero = QuadExt(0, 0, d)
    failures = []
    for l, (x, lval) in enumerate(zip(left_eigenvectors(params), eigenvalues(params))):
        for i in range(m + 1):
            lifted = [zero] * (i * n) + x + [zero] * ((m - i) * n)
            lhs = Q.vecmul(lifted)
            rhs = [lval * y for y in lifted]
            if i < m:
                for j, y in enumerate(x):
                    rhs[(i + 1) * n + j] = rhs[(i + 1) * n + j] + (i + 1) * y
            if lhs != rhs:
                failures.append((i, l))
    return failures
