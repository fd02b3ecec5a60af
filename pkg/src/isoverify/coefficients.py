"""The p-coefficient recurrence and the linear systems assembled from it.

Tables are kept symbolic in X = c*tau^2, so a single table serves every (c, tau)
for fixed (n, m).  Flat column index for the pair (l, q) is ``q*n + l``: l runs
innermost, q outermost.  Row k of a table is the row vector e1~ Q^k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .errors import ParameterError, VerificationError
from .exact import Matrix, MPoly, QuadExt, bareiss_det, exact_rank, lagrange_interpolate
from .kac import SpaceFormParams, build_kac, eigenvalues

_X = MPoly.var("X")
_ZERO = MPoly.const(0, ("X",))


def flat_index(n: int, l: int, q: int) -> int:
    return q * n + l


@lru_cache(maxsize=256)
def _p_rows(n: int, m: int, kmax: int) -> tuple[tuple[MPoly, ...], ...]:
    width = (m + 1) * n
    row = [_ZERO] * width
    row[0] = MPoly.const(1, ("X",))
    rows = [tuple(row)]
    for _ in range(kmax):
        prev = rows[-1]
        nxt = []
        for q in range(m + 1):
            for l in range(n):
                val = _ZERO
                if q:
                    val = val + prev[(q - 1) * n + l] * q
                if l:
                    val = val + prev[q * n + l - 1] * l
                if l + 1 < n:
                    val = val - _X * prev[q * n + l + 1] * (n - 1 - l)
                nxt.append(val)
        rows.append(tuple(nxt))
    return tuple(rows)


@dataclass(frozen=True)
class PTable:
    n: int
    m: int
    kmax: int
    rows: tuple = field(repr=False)

    def get(self, k: int, l: int, q: int) -> MPoly:
        """p_{k,l}^q as a polynomial in X; indices outside the table give 0."""
        if not (0 <= l < self.n and 0 <= q <= self.m):
            return _ZERO
        if not 0 <= k <= self.kmax:
            raise IndexError(f"k={k} outside table range 0..{self.kmax}")
        return self.rows[k][flat_index(self.n, l, q)]

    def value(self, k: int, l: int, q: int, X) -> Fraction:
        return self.get(k, l, q)(X=X)

    def flat_row(self, k: int, X=None) -> list:
        row = list(self.rows[k])
        if X is None:
            return row
        return [p(X=X) for p in row]

    def monomial(self, k: int, l: int, q: int) -> tuple[Fraction, int] | None:
        """(sigma, s) with p = sigma * X^s, or None for a zero entry."""
        p = self.get(k, l, q)
        if not p:
            return None
        if not p.is_monomial():
            raise VerificationError(f"p_{k},{l}^{q} = {p} is not a monomial")
        (s,), coeff = next(iter(p.terms.items()))
        return coeff, s


def p_table(params_or_n, kmax: int, m: int | None = None) -> PTable:
    """Fill p_{k,l}^q for 0 <= k <= kmax from p_0 = e1 by the three-term recurrence."""
    if isinstance(params_or_n, SpaceFormParams):
        n, m = params_or_n.n, params_or_n.m
    else:
        n = params_or_n
    if kmax < 0:
        raise ParameterError("kmax must be non-negative")
    return PTable(n, m, kmax, _p_rows(n, m, kmax))


def check_table_invariants(table: PTable) -> list[tuple[int, int, int]]:
    """Indices violating parity vanishing, the k! diagonal or the exponent rule."""
    bad = []
    for k in range(table.kmax + 1):
        for q in range(table.m + 1):
            for l in range(table.n):
                p = table.get(k, l, q)
                twice_s = k - q - l
                if twice_s < 0 or twice_s % 2:
                    if p:
                        bad.append((k, l, q))
                    continue
                mono = table.monomial(k, l, q)
                s = twice_s // 2
                if s == 0 and mono != (factorial(k), 0):
                    bad.append((k, l, q))
                elif mono is not None and mono[1] != s:
                    bad.append((k, l, q))
    return bad


def e1_qpower_row(params: SpaceFormParams, k: int) -> list[Fraction]:
    """First row of Q^k from the block closed form: binom(k,d) d! (e1 K^(k-d)) in block d."""
    n, m = params.n, params.m
    K = build_kac(params)
    powers = [[Fraction(1)] + [Fraction(0)] * (n - 1)]
    for _ in range(k):
        powers.append(K.vecmul(powers[-1]))
    row = []
    for d in range(m + 1):
        if d > k:
            row.extend([Fraction(0)] * n)
        else:
            scale = comb(k, d) * factorial(d)
            row.extend(x * scale for x in powers[k - d])
    return row


def row_matches_qpower(params: SpaceFormParams, k: int, table: PTable | None = None) -> bool:
    """Whether the level-k p-row equals e1~ Q^k exactly at the given (c, tau)."""
    table = table or p_table(params, k)
    lhs = table.flat_row(k, params.X)
    rhs = e1_qpower_row(params, k)
    return lhs == rhs


def first_row_mismatch(params: SpaceFormParams, k: int, table: PTable | None = None) -> int | None:
    table = table or p_table(params, k)
    lhs = table.flat_row(k, params.X)
    rhs = e1_qpower_row(params, k)
    return next((j for j, (a, b) in enumerate(zip(lhs, rhs)) if a != b), None)


# -- sigma polynomials ------------------------------------------------------

@dataclass(frozen=True)
class SigmaPoly:
    k: int
    l: int
    q: int
    s: int
    poly: MPoly
    samples: tuple

    @property
    def degree(self) -> int:
        return self.poly.degree()

    @property
    def leading_coefficient(self) -> Fraction:
        return self.poly.leading_term()[1]


def sigma_interpolate(l: int, q: int, k: int) -> SigmaPoly:
    """Recover sigma_{k,l}^q(n) by interpolation over n_j = max(l+1, 2) + j, j = 0..k."""
    twice_s = k - q - l
    if k < 2 or twice_s <= 0 or twice_s % 2:
        raise ParameterError(f"(k,l,q)=({k},{l},{q}) does not give a positive integer s")
    s = twice_s // 2
    samples = []
    for j in range(k + 1):
        n = max(l + 1, 2) + j
        mono = p_table(n, k, max(q, 1)).monomial(k, l, q)
        samples.append((n, mono[0] if mono else Fraction(0)))
    poly = lagrange_interpolate(samples, "n")
    sig = SigmaPoly(k, l, q, s, poly, tuple(samples))
    if not poly or sig.degree < s:
        raise VerificationError(f"deg sigma_{k},{l}^{q} = {sig.degree} < s = {s}",
                                witness={"poly": str(poly), "s": s})
    if (sig.leading_coefficient > 0) != (s % 2 == 0):
        raise VerificationError(f"leading sign of sigma_{k},{l}^{q} = {poly} is not (-1)^{s}",
                                witness={"poly": str(poly), "s": s})
    return sig


# -- linear systems ---------------------------------------------------------

@dataclass(frozen=True)
class SystemMatrices:
    M: Matrix
    nu_tau: list
    Mtilde: Matrix


@dataclass(frozen=True)
class SystemMatricesOdd:
    s: int
    Mtilde_s: Matrix
    Ms: Matrix
    nu_tau: list


def _rows_for(params: SpaceFormParams, ks, symbolic: bool) -> list[list]:
    table = p_table(params, max(ks))
    X = None if symbolic else params.X
    return [table.flat_row(k, X) for k in ks]


def build_system(params: SpaceFormParams, symbolic: bool = False) -> SystemMatrices:
    """M, nu_tau and M~ = [-nu_tau | M] from rows k = 2..(m+1)n."""
    rows = _rows_for(params, range(2, params.size + 1), symbolic)
    Mtilde = Matrix(rows)
    nu_tau = [-x for x in Mtilde.col(0)]
    return SystemMatrices(Mtilde.drop_columns([0]), nu_tau, Mtilde)


def build_system_odd(params: SpaceFormParams, s: int, symbolic: bool = False) -> SystemMatricesOdd:
    """M~^s from rows e1~ Q^i, i = 2..(m+1)n-1, then e1~ Q^s; M^s drops the first column."""
    if params.n % 2 == 0:
        raise ParameterError("the M^s construction is for odd n")
    if s < params.size:
        raise ParameterError(f"s must be >= (m+1)n = {params.size}, got {s}")
    ks = list(range(2, params.size)) + [s]
    Mt = Matrix(_rows_for(params, ks, symbolic))
    return SystemMatricesOdd(s, Mt, Mt.drop_columns([0]), [-x for x in Mt.col(0)])


def _expect_rank(name: str, r: int, expected: int, witness: dict) -> int:
    if r != expected:
        raise VerificationError(f"rank {name} = {r}, expected {expected}",
                                witness=dict(witness, rank=r, expected=expected))
    return r


def verify_rank_M(params: SpaceFormParams) -> int:
    if params.n % 2:
        raise ParameterError("rank M is checked for even n")
    r = exact_rank(build_system(params).M)
    return _expect_rank("M", r, params.size - 2, params.as_dict())


def verify_rank_Ms(params: SpaceFormParams, s: int) -> int:
    r = exact_rank(build_system_odd(params, s).Ms)
    return _expect_rank("M^s", r, params.size - 2, dict(params.as_dict(), s=s))


def verify_independence(params: SpaceFormParams, s: int) -> bool:
    """Even n: the rows e1~ Q^i, i = s..s+(m+1)n-1, are independent.

    Odd n: Lambda = {e1~ Q^i : 2 <= i < (m+1)n} has full rank (m+1)n-2 and
    appending e1~ Q^s leaves the rank unchanged.
    """
    N = params.size
    if params.n % 2 == 0:
        if s < 1:
            raise ParameterError("window start must be positive")
        rows = _rows_for(params, range(s, s + N), False)
        _expect_rank("window", exact_rank(Matrix(rows)), N, dict(params.as_dict(), s=s))
        return True
    if s < N:
        raise ParameterError(f"s must be >= (m+1)n = {N}")
    lam = Matrix(_rows_for(params, range(2, N), False))
    _expect_rank("Lambda", exact_rank(lam), N - 2, params.as_dict())
    lam_s = lam.vstack(Matrix([_rows_for(params, [s], False)[0]]))
    _expect_rank("Lambda_s", exact_rank(lam_s), N - 2, dict(params.as_dict(), s=s))
    return True


def verify_column_span(params: SpaceFormParams, q: int) -> bool:
    """Column C_{qn+1} of M~^s lies in the span of C_{qn+2i+1}, i = 1..(n-1)/2 (1-based)."""
    n = params.n
    if n % 2 == 0:
        raise ParameterError("column span property is for odd n")
    if q not in (0, 1):
        raise ParameterError("q must be 0 or 1")
    Mt = build_system_odd(params, params.size).Mtilde_s
    span_cols = [q * n + 2 * i for i in range(1, (n - 1) // 2 + 1)]
    base = Mt.submatrix(range(Mt.rows), span_cols)
    aug = Mt.submatrix(range(Mt.rows), span_cols + [q * n])
    r0, r1 = exact_rank(base), exact_rank(aug)
    if r0 != len(span_cols) or r1 != r0:
        raise VerificationError(
            f"column {q * n + 1} not in span of columns {[c + 1 for c in span_cols]}",
            witness={"rank_span": r0, "rank_augmented": r1})
    return True


# -- generalized Vandermonde ------------------------------------------------

def vandermonde_xi(params: SpaceFormParams, mode: str = "even_full"):
    """Build Xi with rows (l, t) and entries binom(k,t) lam_l^(k-t); return (Xi, det, expected).

    ``even_full`` uses columns k = 0..(m+1)n-1.  ``odd_reduced`` uses columns
    k = 2..(m+1)n-1 and drops the two zero rows (t = 0, 1) of the zero eigenvalue.
    """
    n, m, d = params.n, params.m, params.mu_sq
    lams = eigenvalues(params)
    zero = QuadExt(0, 0, d)
    if mode == "even_full":
        if n % 2:
            raise ParameterError("even_full mode needs even n")
        ks = range(params.size)
    elif mode == "odd_reduced":
        if n % 2 == 0:
            raise ParameterError("odd_reduced mode needs odd n")
        ks = range(2, params.size)
    else:
        raise ParameterError(f"unknown mode {mode!r}")
    rows = []
    for l, lam in enumerate(lams):
        for t in range(m + 1):
            row = [lam ** (k - t) * comb(k, t) if k >= t else zero for k in ks]
            if mode == "odd_reduced" and all(not x for x in row):
                continue
            rows.append(row)
    Xi = Matrix(rows)
    if not Xi.is_square():
        raise VerificationError(f"Xi has shape {Xi.shape}, expected square")
    det = bareiss_det(Xi)
    e = (m + 1) ** 2
    expected = QuadExt(1, 0, d)
    mid = (n - 1) // 2 if n % 2 else None
    for j in range(n):
        for i in range(j):
            if mid not in (i, j):
                expected = expected * (lams[j] - lams[i]) ** e
        if mode == "odd_reduced" and j != mid:
            expected = expected * lams[j] ** e
    return Xi, det, expected


# -- determinant structure --------------------------------------------------

def _monomial(p: MPoly, what: str) -> tuple[Fraction, int]:
    if not p.is_monomial():
        raise VerificationError(f"{what} = {p} is not a single monomial in X",
                                witness={what: str(p)})
    (d,), coeff = next(iter(p.terms.items()))
    return coeff, d


def _beta_gamma(p: MPoly, what: str) -> tuple[int, int] | None:
    """Write p = (-1)^(g/2) beta c^(g/2) tau^g, i.e. beta = (-1)^d coeff with X^d."""
    if not p:
        return None
    coeff, d = _monomial(p, what)
    if coeff.denominator != 1:
        raise VerificationError(f"{what} = {p} has a non-integer coefficient")
    return int(coeff) * (-1) ** d, 2 * d


def _cofactor_chain(Msym: Matrix, col: int) -> list:
    out = []
    for i in range(Msym.rows):
        minor = bareiss_det(Msym.minor(i, col)) * (-1) ** (i + col)
        out.append(_beta_gamma(minor, f"cofactor({i + 1},{col + 1})"))
    return out


def _strictly_decreasing(gs: list[int]) -> bool:
    return all(a > b for a, b in zip(gs, gs[1:]))


def _decreasing_to_positive(gs: list[int]) -> bool:
    """gamma_0 > gamma_1 > ... > 0 over the nonzero entries of a chain."""
    return _strictly_decreasing(gs) and all(g > 0 for g in gs)


@dataclass
class DetStructure:
    params: dict
    column: int
    beta0: int | None
    gamma0: int | None
    chain: list
    gamma_decreasing: bool
    gamma_increasing: bool
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "params": self.params, "column": self.column, "beta0": self.beta0,
            "gamma0": self.gamma0,
            "chain": [None if x is None else {"beta": x[0], "gamma": x[1]} for x in self.chain],
            "gamma_decreasing": self.gamma_decreasing,
            "gamma_increasing": self.gamma_increasing, **self.extra,
        }


def det_structure_M_iota(params: SpaceFormParams) -> DetStructure:
    """Search iota ascending for det M_iota^tau != 0 and read off its monomial structure.

    det M_iota^tau must be beta0 (-1)^(g0/2) c^(g0/2) tau^g0.  Expanding
    det M_iota^phi along column iota gives the coefficient of -phi_i(0) for
    each row i, again a monomial (beta_i, gamma_i).
    """
    if params.n % 2:
        raise ParameterError("det structure of M_iota is for even n")
    system = build_system(params, symbolic=True)
    M, nu = system.M, system.nu_tau
    for iota in range(M.cols):
        d0 = bareiss_det(M.replace_column(iota, nu))
        if d0:
            break
    else:
        raise VerificationError("no column iota gives det M_iota^tau != 0")
    beta0, gamma0 = _beta_gamma(d0, "det M_iota^tau")
    chain = _cofactor_chain(M, iota)
    return _chain_report(params.as_dict(), iota + 1, beta0, gamma0, chain)


def det_sign_pattern_holds(params: SpaceFormParams, structure: DetStructure) -> bool:
    """Evaluate det M_iota^tau at the concrete (c, tau) and compare with
    (-1)^(g/2) beta0 c^(g/2) tau^g from the symbolic structure."""
    system = build_system(params, symbolic=False)
    val = bareiss_det(system.M.replace_column(structure.column - 1, system.nu_tau))
    half = structure.gamma0 // 2
    predicted = (-1) ** half * structure.beta0 * Fraction(params.c) ** half * params.tau ** structure.gamma0
    return structure.gamma0 % 2 == 0 and val == predicted


def _chain_report(pdict, column, beta0, gamma0, chain, **extra) -> DetStructure:
    gs = [g for g in ([gamma0] if gamma0 is not None else []) +
          [x[1] for x in chain if x is not None]]
    return DetStructure(pdict, column, beta0, gamma0, chain,
                        _decreasing_to_positive(gs),
                        _strictly_decreasing(gs[::-1]) if gs else True, extra)


def det_structure_Ms(params: SpaceFormParams, s: int) -> DetStructure:
    """det M_n^{s,tau} vanishes; the last-row cofactor along column n gives (beta_s, gamma_s)."""
    system = build_system_odd(params, s, symbolic=True)
    Ms, nu = system.Ms, system.nu_tau
    col = params.n - 1
    d_tau = bareiss_det(Ms.replace_column(col, nu))
    if d_tau:
        raise VerificationError(f"det M_n^(s,tau) = {d_tau} is not zero", witness={"det": str(d_tau)})
    chain = _cofactor_chain(Ms, col)
    last = chain[-1]
    if last is None:
        raise VerificationError("beta_s vanishes", witness={"s": s})
    # beta_s as the plain minor, without the cofactor sign
    plain = bareiss_det(Ms.minor(Ms.rows - 1, col))
    return _chain_report(dict(params.as_dict(), s=s), col + 1, None, None, chain,
                         beta_s=last[0], gamma_s=last[1], beta_s_minor=str(plain))
