"""Jacobi-field determinant calculus for parallel hypersurfaces.

Along the normal geodesics of a hypersurface with constant angle, the Jacobi
matrix is B(r) with rows 1..m equal to I - rA and the remaining rows C*I - S*A,
where S = S_tau(r), C = C_tau(r) solve S' = C, C' = -X S with X = c*tau^2.
D = det B is a polynomial in r, S, C; its derivatives stay in the span of the
monomials r^q S^l C^(n-1-l), whose coefficient tables are ``TrigPoly`` values.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .coefficients import build_system, flat_index, p_table
from .errors import FocalPointError, ParameterError, StructuralError, VerificationError
from .exact import Matrix, MPoly, bareiss_det, solve
from .kac import SpaceFormParams

VARS = ("r", "S", "C")
_R = MPoly.var("r", VARS)
_S = MPoly.var("S", VARS)
_C = MPoly.var("C", VARS)


# -- S_tau and C_tau --------------------------------------------------------

@dataclass(frozen=True)
class STC:
    params: SpaceFormParams

    def S(self, r: float) -> float:
        tau = float(self.params.tau)
        if self.params.c > 0:
            return math.sin(tau * r) / tau
        return math.sinh(tau * r) / tau

    def C(self, r: float) -> float:
        tau = float(self.params.tau)
        return math.cos(tau * r) if self.params.c > 0 else math.cosh(tau * r)

    def series(self, order: int) -> tuple[list[Fraction], list[Fraction]]:
        """Taylor coefficients of S and C about r = 0, up to r^order."""
        X = self.params.X
        S = [Fraction(0)] * (order + 1)
        C = [Fraction(0)] * (order + 1)
        for k in range(order + 1):
            j, odd = divmod(k, 2)
            term = (-X) ** j / math.factorial(k)
            if odd:
                S[k] = term
            else:
                C[k] = term
        return S, C


# -- shape matrices ---------------------------------------------------------

class ShapeMatrix:
    """Symmetric (n+m-1)-square matrix of a shape operator in the adapted frame."""

    def __init__(self, a: Sequence[Sequence], n: int, m: int):
        self.a = Matrix(a)
        self.n, self.m = n, m
        size = n + m - 1
        if self.a.shape != (size, size):
            raise StructuralError(f"shape matrix must be {size}x{size}, got {self.a.shape}")
        if self.a != self.a.T:
            raise StructuralError("shape matrix is not symmetric")

    @classmethod
    def zero(cls, n: int, m: int) -> "ShapeMatrix":
        size = n + m - 1
        return cls([[0] * size for _ in range(size)], n, m)

    @classmethod
    def random(cls, n: int, m: int, rng: random.Random, bound: int = 3) -> "ShapeMatrix":
        size = n + m - 1
        a = [[0] * size for _ in range(size)]
        for i in range(size):
            for j in range(i, size):
                a[i][j] = a[j][i] = rng.randint(-bound, bound)
        return cls(a, n, m)

    def conjugate(self, O: Matrix) -> "ShapeMatrix":
        return ShapeMatrix((O @ self.a @ O.T).tolist(), self.n, self.m)

    def trace(self) -> Fraction:
        return sum((self.a[i, i] for i in range(self.a.rows)), Fraction(0))

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.a.tolist()])


def cayley_orthogonal(skew: Matrix) -> Matrix:
    """Rational orthogonal matrix (I - K)(I + K)^(-1) from a skew-symmetric K."""
    n = skew.rows
    I = Matrix.identity(n)
    plus, minus = I + skew, I - skew
    inv_cols = [solve(plus, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    inv = Matrix([[inv_cols[j][i] for j in range(n)] for i in range(n)])
    return minus @ inv


def random_frame_change(n: int, m: int, rng: random.Random) -> Matrix:
    """Orthogonal change of the Euclidean-only frame vectors U_1..U_{m-1}.

    The mixed vector U_m and the factor-adapted vectors stay fixed, so this is
    exactly the freedom in completing the frame.
    """
    size = n + m - 1
    k = m - 1
    blocks = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        blocks[i][i] = Fraction(1)
    if k >= 2:
        sk = [[Fraction(0)] * k for _ in range(k)]
        for i in range(k):
            for j in range(i + 1, k):
                v = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
                sk[i][j], sk[j][i] = v, -v
        O = cayley_orthogonal(Matrix(sk))
        for i in range(k):
            for j in range(k):
                blocks[i][j] = O[i, j]
    elif k == 1:
        blocks[0][0] = Fraction(rng.choice((-1, 1)))
    return Matrix(blocks)


# -- B(r) and D(r) ----------------------------------------------------------

def build_B(A: ShapeMatrix, params: SpaceFormParams) -> Matrix:
    """Rows i <= m: delta_ij - a_ij r; rows i > m: delta_ij C - a_ij S."""
    _check_dims(A, params)
    size = A.a.rows
    rows = []
    for i in range(size):
        top = i < params.m
        var, diag = (_R, 1) if top else (_S, _C)
        rows.append([(diag if i == j else 0) - var * A.a[i, j] for j in range(size)])
    return Matrix([[x if isinstance(x, MPoly) else MPoly.const(x, VARS) for x in r] for r in rows])


def _check_dims(A: ShapeMatrix, params: SpaceFormParams):
    if (A.n, A.m) != (params.n, params.m):
        raise StructuralError(f"shape matrix is for (n,m)=({A.n},{A.m}), params give ({params.n},{params.m})")


def d_dr(p: MPoly, X) -> MPoly:
    """Total r-derivative in the ring generated by r, S, C."""
    return p.derive("r") + _C * p.derive("S") - _S * p.derive("C") * X


@dataclass(frozen=True)
class TrigPoly:
    """sum over (l, q) of coeffs[l, q] * r^q S^l C^(n-1-l) at fixed X = c tau^2."""

    n: int
    m: int
    X: Fraction
    coeffs: tuple

    @classmethod
    def from_table(cls, n, m, X, table: dict) -> "TrigPoly":
        grid = tuple(tuple(Fraction(table.get((l, q), 0)) for q in range(m + 1)) for l in range(n))
        return cls(n, m, Fraction(X), grid)

    @classmethod
    def from_mpoly(cls, p: MPoly, n: int, m: int, X) -> "TrigPoly":
        if p.vars != VARS:
            raise StructuralError(f"expected a polynomial in {VARS}")
        table = {}
        for (q, l, j), coeff in p.terms.items():
            if l + j != n - 1 or q > m:
                raise VerificationError(
                    f"term r^{q} S^{l} C^{j} breaks homogeneity of degree {n - 1} or r-degree <= {m}")
            table[l, q] = coeff
        return cls.from_table(n, m, X, table)

    def coefficient(self, l: int, q: int) -> Fraction:
        if 0 <= l < self.n and 0 <= q <= self.m:
            return self.coeffs[l][q]
        return Fraction(0)

    def to_mpoly(self) -> MPoly:
        terms = {}
        for l in range(self.n):
            for q in range(self.m + 1):
                if self.coeffs[l][q]:
                    terms[q, l, self.n - 1 - l] = self.coeffs[l][q]
        return MPoly(terms, VARS)

    def derive(self) -> "TrigPoly":
        """Coefficient recurrence (q+1) a^{q+1}_l + (l+1) a^q_{l+1} - (n-l) X a^q_{l-1}."""
        a = self.coefficient
        table = {}
        for l in range(self.n):
            for q in range(self.m + 1):
                table[l, q] = ((q + 1) * a(l, q + 1) + (l + 1) * a(l + 1, q)
                               - (self.n - l) * self.X * a(l - 1, q))
        return TrigPoly.from_table(self.n, self.m, self.X, table)

    def derive_chain(self) -> "TrigPoly":
        """Derivative by the chain rule on the polynomial in r, S, C."""
        return TrigPoly.from_mpoly(d_dr(self.to_mpoly(), self.X), self.n, self.m, self.X)

    def evaluate(self, r: float, S: float, C: float) -> float:
        return sum(float(self.coeffs[l][q]) * r ** q * S ** l * C ** (self.n - 1 - l)
                   for l in range(self.n) for q in range(self.m + 1) if self.coeffs[l][q])

    def to_json(self) -> dict:
        return {f"{l},{q}": _fmt(self.coeffs[l][q])
                for l in range(self.n) for q in range(self.m + 1) if self.coeffs[l][q]}


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def det_B_poly(A: ShapeMatrix, params: SpaceFormParams) -> MPoly:
    return bareiss_det(build_B(A, params))


def det_B(A: ShapeMatrix, params: SpaceFormParams) -> TrigPoly:
    D = TrigPoly.from_mpoly(det_B_poly(A, params), params.n, params.m, params.X)
    if D.coefficient(0, 0) != 1:
        raise VerificationError(f"D(0) = {D.coefficient(0, 0)}, expected 1")
    return D


def alpha_table(A: ShapeMatrix, params: SpaceFormParams, kmax: int,
                cross_check: bool = True) -> list[TrigPoly]:
    """D, D', ..., D^(kmax) by the coefficient recurrence, each step checked by the chain rule."""
    if kmax < 1:
        raise ParameterError("kmax must be >= 1")
    table = [det_B(A, params)]
    for k in range(kmax):
        nxt = table[-1].derive()
        if cross_check and nxt != table[-1].derive_chain():
            raise VerificationError(f"coefficient recurrence disagrees with chain rule at k={k + 1}")
        table.append(nxt)
    return table


def alpha_table_chain(A: ShapeMatrix, params: SpaceFormParams, kmax: int) -> list[TrigPoly]:
    table = [det_B(A, params)]
    for _ in range(kmax):
        table.append(table[-1].derive_chain())
    return table


# -- phi_k(0) ---------------------------------------------------------------

def phi_vector(A: ShapeMatrix, params: SpaceFormParams, kmax: int,
               cross_check: bool = True) -> list[Fraction]:
    """[phi_1(0), ..., phi_kmax(0)] with phi_k(0) = -alpha_{0,k+1}^0."""
    table = alpha_table(A, params, kmax + 1, cross_check=cross_check)
    phi = [-table[k + 1].coefficient(0, 0) for k in range(1, kmax + 1)]
    if cross_check:
        other = phi_vector_series(A, params, kmax)
        if other != phi:
            bad = next(k for k, (a, b) in enumerate(zip(phi, other), 1) if a != b)
            raise VerificationError(f"phi_{bad}(0) differs between table and power-series route",
                                    witness={"k": bad, "table": str(phi[bad - 1]),
                                             "series": str(other[bad - 1])})
    return phi


def _ser_mul(a: list, b: list) -> list:
    n = min(len(a), len(b))
    return [sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(n)]


def _ser_add(a: list, b: list) -> list:
    return [x + y for x, y in zip(a, b)]


def _ser_deriv(a: list) -> list:
    return [a[k] * k for k in range(1, len(a))]


def phi_vector_series(A: ShapeMatrix, params: SpaceFormParams, kmax: int) -> list[Fraction]:
    """phi_k(0) from H = -D'/D on truncated Taylor series, via psi_1 = -H,
    psi_{k+1} = psi_k' - psi_k H and phi_k = -psi_{k+1}."""
    order = kmax + 3
    S, C = STC(params).series(order)
    r = [Fraction(0), Fraction(1)] + [Fraction(0)] * (order - 1)
    one = [Fraction(1)] + [Fraction(0)] * order
    D = [Fraction(0)] * (order + 1)
    for (q, l, j), coeff in det_B_poly(A, params).terms.items():
        term = list(one)
        for base, e in ((r, q), (S, l), (C, j)):
            for _ in range(e):
                term = _ser_mul(term, base)
        D = _ser_add(D, [coeff * t for t in term])
    # 1/D as a series; D(0) = 1
    inv = [Fraction(1)] + [Fraction(0)] * order
    for k in range(1, order + 1):
        inv[k] = -sum((D[i] * inv[k - i] for i in range(1, k + 1)), Fraction(0))
    H = [-x for x in _ser_mul(_ser_deriv(D), inv)]
    psi = [-x for x in H]
    out = []
    for _ in range(kmax):
        psi = _ser_add(_ser_deriv(psi), [-x for x in _ser_mul(psi, H)])
        out.append(-psi[0])
    return out


# -- the linear system ------------------------------------------------------

def xi0(D: TrigPoly) -> list[Fraction]:
    """alpha_{l,0}^q in flat column order with (l, q) = (0, 0) removed."""
    out = [Fraction(0)] * ((D.m + 1) * D.n - 1)
    for q in range(D.m + 1):
        for l in range(D.n):
            j = flat_index(D.n, l, q)
            if j:
                out[j - 1] = D.coefficient(l, q)
    return out


def system_residual(A: ShapeMatrix, params: SpaceFormParams) -> Fraction:
    """max |(M xi_0 - nu)_k| with nu = nu_tau + nu_phi; zero for every A."""
    N = params.size
    phi = phi_vector(A, params, N - 1)
    system = build_system(params)
    D = det_B(A, params)
    xi = xi0(D)
    lhs = [sum((x * y for x, y in zip(system.M.row(i), xi)), Fraction(0))
           for i in range(system.M.rows)]
    nu = [t - p for t, p in zip(system.nu_tau, phi)]
    residual = [abs(a - b) for a, b in zip(lhs, nu)]
    worst = max(residual)
    if worst:
        row = residual.index(worst)
        raise VerificationError(f"M xi_0 != nu at row {row + 1}",
                                witness={"row": row + 1, "residual": str(worst)})
    return worst


def bridge_identity_failures(A: ShapeMatrix, params: SpaceFormParams, kmax: int | None = None) -> list[int]:
    """k with alpha_{0,k}^0 != sum p_{k,l}^q alpha_{l,0}^q, for 1 <= k <= kmax."""
    kmax = kmax or params.size
    table = alpha_table(A, params, kmax, cross_check=False)
    p = p_table(params, kmax)
    D = table[0]
    bad = []
    for k in range(1, kmax + 1):
        rhs = sum((p.value(k, l, q, params.X) * D.coefficient(l, q)
                   for l in range(params.n) for q in range(params.m + 1)), Fraction(0))
        if rhs != table[k].coefficient(0, 0):
            bad.append(k)
    return bad


def trace_identity_holds(A: ShapeMatrix, params: SpaceFormParams) -> bool:
    """D' = tr(B' adj B) as polynomials in r, S, C, i.e. D' + H D = 0 with H = -tr(B' B^-1)."""
    B = build_B(A, params)
    X = params.X
    Bp = B.map(lambda p: d_dr(p, X))
    size = B.rows
    total = MPoly.const(0, VARS)
    for i in range(size):
        for j in range(size):
            if Bp[i, j]:
                cof = bareiss_det(B.minor(i, j)) * (-1) ** (i + j) if size > 1 else MPoly.const(1, VARS)
                total = total + Bp[i, j] * cof
    return d_dr(bareiss_det(B), X) == total


# -- numeric evaluation -----------------------------------------------------

@dataclass
class ParallelShape:
    r: float
    A_r: np.ndarray
    H: float
    H_from_D: float


def _B_numeric(A: np.ndarray, params: SpaceFormParams, r: float) -> tuple[np.ndarray, np.ndarray]:
    stc = STC(params)
    S, C = stc.S(r), stc.C(r)
    X = float(params.X)
    size = A.shape[0]
    m = params.m
    scale = np.array([r] * m + [S] * (size - m))
    diag = np.array([1.0] * m + [C] * (size - m))
    dscale = np.array([1.0] * m + [C] * (size - m))
    ddiag = np.array([0.0] * m + [-X * S] * (size - m))
    B = np.diag(diag) - scale[:, None] * A
    Bp = np.diag(ddiag) - dscale[:, None] * A
    return B, Bp


def parallel_shape(A: ShapeMatrix, params: SpaceFormParams, r, tol: float = 1e-12) -> ParallelShape:
    """A_r = -B'(r) B(r)^-1 and H(r) = tr A_r, checked against -D'(r)/D(r)."""
    _check_dims(A, params)
    r = float(r)
    B, Bp = _B_numeric(A.to_numpy(), params, r)
    detB = np.linalg.det(B)
    if abs(detB) < 1e-12 * max(1.0, np.abs(B).max()) ** B.shape[0]:
        raise FocalPointError(f"det B({r}) = {detB:.3e}: focal point of the parallel family")
    A_r = -Bp @ np.linalg.inv(B)
    H = float(np.trace(A_r))
    stc = STC(params)
    S, C = stc.S(r), stc.C(r)
    D = det_B(A, params)
    H_D = -D.derive().evaluate(r, S, C) / D.evaluate(r, S, C)
    if not math.isclose(H, H_D, rel_tol=1e-9, abs_tol=tol * 1e3):
        raise VerificationError(f"tr A_r = {H} but -D'/D = {H_D} at r = {r}")
    return ParallelShape(r, A_r, H, H_D)


def phi1_at(A: ShapeMatrix, params: SpaceFormParams, r: float) -> float:
    """phi_1(r) = -D''(r)/D(r)."""
    stc = STC(params)
    S, C = stc.S(r), stc.C(r)
    D = det_B(A, params)
    return -D.derive().derive().evaluate(r, S, C) / D.evaluate(r, S, C)


def mean_curvature_derivative_fd(A: ShapeMatrix, params: SpaceFormParams, r: float,
                                 h: float = 1e-4) -> tuple[float, float]:
    """(H'(r) by a 4th-order central stencil, phi_1(r) + H(r)^2)."""
    H = lambda x: parallel_shape(A, params, x).H
    fd = (-H(r + 2 * h) + 8 * H(r + h) - 8 * H(r - h) + H(r - 2 * h)) / (12 * h)
    return fd, phi1_at(A, params, r) + H(r) ** 2


# -- constant-angle branch evolution ----------------------------------------

def _calS(c: int, x: float) -> float:
    return math.sin(x) if c > 0 else (math.sinh(x) if c < 0 else x)


def _calC(c: int, x: float) -> float:
    return math.cos(x) if c > 0 else (math.cosh(x) if c < 0 else 1.0)


def parallel_principal_branch(lam: float, branch: tuple, t: float) -> float:
    """Principal curvature at distance t along a branch ("horizontal"|"vertical", c_i, C_i).

    Evaluates (c_i C_i S_i(C_i t) + lam C_i(C_i t)) / (C_i(C_i t) - (lam/C_i) S_i(C_i t)),
    written as C_i * (c_i C_i S + lam Cc) / (C_i Cc - lam S) so that the horosphere value
    lam = C_i, c_i = -1 comes out exactly C_i.
    """
    kind, c, Ci = branch
    if kind not in ("horizontal", "vertical"):
        raise ParameterError(f"unknown branch {kind!r}")
    if c not in (-1, 0, 1):
        raise ParameterError("branch curvature must be -1, 0 or 1")
    if Ci == 0:
        # limit C_i -> 0: S_i(C_i t)/C_i -> t, C_i(C_i t) -> 1
        den = 1.0 - lam * t
        if den == 0:
            raise FocalPointError(f"focal point at t = {t}")
        return lam / den
    x = Ci * t
    S, Cc = _calS(c, x), _calC(c, x)
    num = c * Ci * S + lam * Cc
    den = Ci * Cc - lam * S
    if den == 0 or abs(den) < 1e-14 * (abs(Ci * Cc) + abs(lam * S)):
        raise FocalPointError(f"focal point at t = {t}")
    return Ci * (num / den)


def check_sum_squares_identity(lam_H: Sequence, lam_R: Sequence, C1, C) -> bool:
    """sum lam_H^2 == (n-1) C1^2 + ((1+C)/(1-C))^2 sum lam_R^2, with n-1 = len(lam_H)."""
    values = list(lam_H) + list(lam_R) + [C1, C]
    if C == 1:
        raise ParameterError("angle C = 1 makes the identity undefined")
    lhs = sum(x * x for x in lam_H)
    rhs = len(lam_H) * C1 * C1 + ((1 + C) / (1 - C)) ** 2 * sum(x * x for x in lam_R)
    if all(isinstance(v, (int, Fraction)) for v in values):
        return lhs == rhs
    return math.isclose(float(lhs), float(rhs), rel_tol=1e-12, abs_tol=1e-12)
