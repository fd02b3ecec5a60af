"""Independent reference computations used only by the tests.

Nothing here calls the package's elimination, recurrence or derivative code:
determinants use Laplace expansion or sympy, matrix powers use plain
repeated multiplication, and numerics use mpmath at high precision.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

import mpmath
import numpy as np
import sympy as sp


def cofactor_det(rows):
    """Laplace expansion along the first row; fine for the small matrices used in tests."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if not rows[0][j]:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def leibniz_sign(perm) -> int:
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sympy_rank(rows) -> int:
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x
                       for x in r] for r in rows]).rank()


def kac_rows(n: int, c: int, tau: Fraction):
    """The Kac matrix written out directly from its entry description (1-based formulas)."""
    K = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n):
        K[i - 1][i] = Fraction(i)
        K[i][i - 1] = -(n - i) * c * tau * tau
    return K


def q_rows(n: int, m: int, c: int, tau: Fraction):
    K = kac_rows(n, c, tau)
    size = (m + 1) * n
    Q = [[Fraction(0)] * size for _ in range(size)]
    for b in range(m + 1):
        for i in range(n):
            for j in range(n):
                Q[b * n + i][b * n + j] = K[i][j]
            if b < m:
                Q[b * n + i][(b + 1) * n + i] = Fraction(b + 1)
    return Q


def matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(len(B[0]))]
            for i in range(len(A))]


def first_row_of_power(Q, k: int):
    """e1 Q^k by k successive row-vector products."""
    row = [Fraction(1)] + [Fraction(0)] * (len(Q) - 1)
    for _ in range(k):
        row = [sum((row[i] * Q[i][j] for i in range(len(Q))), Fraction(0)) for j in range(len(Q))]
    return row


def sympy_charpoly_kac(n: int):
    """det(lam I - K) with c and tau as sympy symbols."""
    lam, c, tau = sp.symbols("lam c tau")
    K = sp.zeros(n, n)
    for i in range(1, n):
        K[i - 1, i] = i
        K[i, i - 1] = -(n - i) * c * tau ** 2
    return sp.expand((lam * sp.eye(n) - K).det()), (lam, c, tau)


def mp_vandermonde_det(n: int, m: int, c: int, tau: Fraction, ks):
    """det of the confluent block matrix with entries binom(k,t) lam^(k-t), in mpmath complex arithmetic."""
    mpmath.mp.dps = 60
    mu = mpmath.sqrt(mpmath.mpf(-c) * mpmath.mpf(tau.numerator) ** 2 / tau.denominator ** 2)
    lams = [(n - 1 - 2 * l) * mu for l in range(n)]
    rows = []
    for lam in lams:
        for t in range(m + 1):
            row = [mpmath.binomial(k, t) * lam ** (k - t) if k >= t else mpmath.mpf(0) for k in ks]
            if all(x == 0 for x in row):
                continue
            rows.append(row)
    return mpmath.det(mpmath.matrix(rows)), lams


# -- Jacobi determinant by sympy ---------------------------------------------

def sympy_D(A, n: int, m: int, c: int, tau: Fraction):
    """D(r) = det B(r) with S, C the genuine trigonometric/hyperbolic functions of r."""
    r = sp.symbols("r")
    t = sp.Rational(tau.numerator, tau.denominator)
    if c > 0:
        S, C = sp.sin(t * r) / t, sp.cos(t * r)
    else:
        S, C = sp.sinh(t * r) / t, sp.cosh(t * r)
    size = n + m - 1
    B = sp.zeros(size, size)
    for i in range(size):
        for j in range(size):
            a = sp.Rational(A[i][j].numerator, A[i][j].denominator) if isinstance(A[i][j], Fraction) \
                else A[i][j]
            if i < m:
                B[i, j] = (1 if i == j else 0) - a * r
            else:
                B[i, j] = (C if i == j else 0) - a * S
    return B.det(), r


def sympy_derivatives_at_zero(expr, r, kmax: int):
    """[expr(0), expr'(0), ..., expr^(kmax)(0)] from a Taylor expansion."""
    ser = sp.series(expr, r, 0, kmax + 1).removeO()
    return [sp.nsimplify(ser.coeff(r, k) * sp.factorial(k)) for k in range(kmax + 1)]


# -- geometry: shape operator by differentiating the normal field ------------

def fd_second_fundamental_form(example, p, X, Y, h: float = 1e-5):
    """-<nabla_X N, Y> with N differentiated numerically along the ambient geodesic in direction X.

    The ambient connection of the model is the tangential projection of the
    flat derivative, and Y is tangent at p, so -<dN/dt, Y> needs no projection.
    """
    from isoverify.geometry import factor_exp, inner, level_set_frame

    def N_at(t):
        q = factor_exp(p, X, t)
        return level_set_frame(example, q).N

    Np, Nm = N_at(h), N_at(-h)
    Np2, Nm2 = N_at(2 * h), N_at(-2 * h)
    dh = (-Np2.h + 8 * Np.h - 8 * Nm.h + Nm2.h) / (12 * h)
    dv = (-Np2.v + 8 * Np.v - 8 * Nm.v + Nm2.v) / (12 * h)
    from isoverify.geometry import TangentVec
    return -inner(p, TangentVec(dh, dv), Y)


def fd_sectional(example, p, X, Y) -> float:
    """Gauss equation with the numerically differentiated second fundamental form."""
    from isoverify.geometry import ambient_curvature, inner
    II = lambda A, B: fd_second_fundamental_form(example, p, A, B)
    num = ambient_curvature(p, X, Y, X, Y) + II(X, X) * II(Y, Y) - II(X, Y) ** 2
    return num / (inner(p, X, X) * inner(p, Y, Y) - inner(p, X, Y) ** 2)


def permutation_sign_check(rows, det_fn, rng) -> bool:
    """det(P A) == sign(P) det(A) for a random row permutation."""
    perm = list(rng.permutation(len(rows)))
    shuffled = [rows[i] for i in perm]
    return det_fn(shuffled) == leibniz_sign(perm) * det_fn(rows)


def all_perms(n):
    return list(permutations(range(n)))


def np_lorentz_gram(vectors):
    J = np.diag([-1.0] + [1.0] * (len(vectors[0]) - 1))
    V = np.column_stack(vectors)
    return V.T @ J @ V


# -- isoparametric gradient identities in coordinates ------------------------

def sympy_grad_norm_identity(family: str) -> bool:
    """|grad F|^2 - b(F) simplifies to 0 in local coordinates.

    s1: coordinates (x, y1, y2), flat metric.  hn: H^2 x R as (xi1, xi2, y)
    with x0 = sqrt(1 + |xi|^2), whose inverse metric on the xi block is I + xi xi^T,
    and u = (1, 1, 0).
    """
    if family == "s1":
        x, y1, y2, k = sp.symbols("x y1 y2 kappa", real=True)
        F = sp.sin(x - k * y1)
        g2 = sum(sp.diff(F, v) ** 2 for v in (x, y1, y2))
        return sp.simplify(g2 - (1 + k ** 2) * (1 - F ** 2)) == 0
    x1, x2, y, a = sp.symbols("xi1 xi2 y a", real=True)
    x0 = sp.sqrt(1 + x1 ** 2 + x2 ** 2)
    F = (-x0 + x1) * sp.exp(a * y)
    xi = sp.Matrix([x1, x2])
    ginv = sp.eye(2) + xi * xi.T
    dF = sp.Matrix([sp.diff(F, x1), sp.diff(F, x2)])
    g2 = (dF.T * ginv * dF)[0] + sp.diff(F, y) ** 2
    return sp.simplify(g2 - (1 + a ** 2) * F ** 2) == 0
