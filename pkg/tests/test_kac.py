from fractions import Fraction
from math import comb

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from isoverify.errors import ParameterError
from isoverify.exact import Matrix, MPoly, QuadExt, bareiss_det
from isoverify.kac import (SpaceFormParams, build_kac, build_q, charpoly_kac, e1_eigen_coordinates,
                           eigenvalues, eigenvector_relation_residual, kac_rank, left_eigenvectors,
                           q_power_closed)
from oracles import kac_rows, matmul, q_rows, sympy_charpoly_kac

F = Fraction
params_st = st.builds(SpaceFormParams, st.integers(2, 6), st.integers(1, 3), st.sampled_from([-1, 1]),
                      st.sampled_from([F(1, 3), F(1, 2), F(2, 3)]))


def test_params_validation():
    for bad in [(1, 1, 1, F(1, 2)), (2, 0, 1, F(1, 2)), (2, 1, 0, F(1, 2)), (2, 1, 1, F(3, 2)),
                (2, 1, 1, F(0))]:
        with pytest.raises(ParameterError):
            SpaceFormParams(*bad)


def test_build_kac_examples():
    assert build_kac(SpaceFormParams(2, 1, -1, F(1, 2))) == Matrix([[0, 1], [F(1, 4), 0]])
    assert build_kac(SpaceFormParams(3, 1, 1, F(1, 2))) == \
        Matrix([[0, 1, 0], [F(-1, 2), 0, 2], [0, F(-1, 4), 0]])


@given(params_st)
def test_build_kac_matches_entry_formula(p):
    K = build_kac(p)
    assert K.tolist() == kac_rows(p.n, p.c, p.tau)
    assert all(K[i, i] == 0 for i in range(p.n))


@given(params_st)
def test_build_q_block_pattern(p):
    assert build_q(p).tolist() == q_rows(p.n, p.m, p.c, p.tau)


def test_q_blocks_m2():
    p = SpaceFormParams(3, 2, 1, F(1, 3))
    Q, n = build_q(p), 3
    assert Q.submatrix(range(0, n), range(n, 2 * n)) == Matrix.identity(n)
    assert Q.submatrix(range(n, 2 * n), range(2 * n, 3 * n)) == Matrix.identity(n).scale(2)


@given(params_st)
def test_det_q_is_power_of_det_k(p):
    assert bareiss_det(build_q(p)) == bareiss_det(build_kac(p)) ** (p.m + 1)


def test_q_power_closed_small_cases():
    p = SpaceFormParams(2, 2, 1, F(1, 2))
    assert q_power_closed(p, 0) == Matrix.identity(p.size)
    assert q_power_closed(p, 1) == build_q(p)
    Q = q_rows(2, 2, 1, F(1, 2))
    direct = Q
    for _ in range(4):
        direct = matmul(direct, Q)
    assert q_power_closed(p, 5).tolist() == direct


@given(params_st, st.integers(0, 8))
def test_q_power_closed_semigroup(p, j):
    assert q_power_closed(p, j) @ q_power_closed(p, 1) == q_power_closed(p, j + 1)


def test_charpoly_n2():
    lam = MPoly.var("lam")
    for c in (-1, 1):
        for tau in (F(1, 3), F(1, 2)):
            assert charpoly_kac(SpaceFormParams(2, 1, c, tau)) == lam ** 2 + c * tau * tau


def test_charpoly_roots_n3():
    chi = charpoly_kac(SpaceFormParams(3, 1, -1, F(1, 2)))
    assert [chi(lam=x) for x in (1, 0, -1)] == [0, 0, 0]


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_charpoly_matches_sympy(n):
    expr, (lam, c, tau) = sympy_charpoly_kac(n)
    for cv in (-1, 1):
        for tv in (F(1, 3), F(2, 3)):
            chi = charpoly_kac(SpaceFormParams(n, 1, cv, tv))
            ref = sp.Poly(expr.subs({c: cv, tau: sp.Rational(tv.numerator, tv.denominator)}), lam)
            ours = [chi.coefficient((k,)) for k in range(n + 1)]
            assert [F(int(sp.fraction(x)[0]), int(sp.fraction(x)[1]))
                    for x in reversed(ref.all_coeffs())] == ours
            # only terms of the parity of n survive
            assert all(not ours[k] for k in range(n + 1) if (n - k) % 2)


def test_kac_rank_examples():
    assert [kac_rank(SpaceFormParams(n, 1, -1, F(1, 2))) for n in (2, 3, 5)] == [2, 2, 4]


@pytest.mark.parametrize("n,c,tau", [(2, -1, F(1, 2)), (3, -1, F(1, 3)), (4, 1, F(1, 2))])
def test_e1_coordinates_nonzero(n, c, tau):
    coords = e1_eigen_coordinates(SpaceFormParams(n, 1, c, tau))
    assert len(coords) == n and all(coords)


@given(params_st)
def test_e1_coordinates_are_binomial_weights(p):
    # with the left eigenvectors normalised to first coordinate 1, e1 = sum binom(n-1,l)/2^(n-1) x_l
    coords = e1_eigen_coordinates(SpaceFormParams(p.n, 1, p.c, p.tau))
    d = p.mu_sq
    assert coords == [QuadExt(F(comb(p.n - 1, l), 2 ** (p.n - 1)), 0, d) for l in range(p.n)]


@given(params_st)
def test_left_eigenvectors(p):
    K = build_kac(p).map(lambda x: QuadExt(x, 0, p.mu_sq))
    for x, lam in zip(left_eigenvectors(p), eigenvalues(p)):
        assert K.vecmul(x) == [lam * y for y in x]


@given(params_st)
def test_eigenvector_relation(p):
    assert eigenvector_relation_residual(p) == []
