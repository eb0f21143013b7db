"""Formal principal series eta and the eigenbasis xi_w."""

import random

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from bqkz.cocycle import random_point
from bqkz.laurent import Laurent
from bqkz.linalg import determinant, identity, mat_mul

from .conftest import SMALL, setup

K = mpq(3)


def test_eta_of_t1_in_a1():
    ps = setup("A", 1).ps
    M = ps.eta(ps.H.Ti(1))
    assert M.is_constant()
    assert M.evaluate((mpq(1),)) == [[0, 1], [1, K - 1 / K]]


def test_eta_of_unit_is_identity():
    ps = setup("A", 2).ps
    assert ps.eta_at(ps.H.one(), (mpq(2), mpq(-3, 5))) == identity(ps.dim)


@pytest.mark.parametrize("t,n", SMALL)
def test_eta_y_on_t_e(t, n):
    ps = setup(t, n).ps
    for lam in [(1,) + (0,) * (n - 1), (-1,) * n, (2,) + (-1,) * (n - 1)]:
        M = ps.eta(ps.H.Y(lam))
        col = [M.rows[r][0] for r in range(ps.dim)]
        assert col[0] == Laurent.monomial(lam)
        assert all(f == 0 for f in col[1:])


def test_eta_y_alpha_at_a_point_in_a1():
    ps = setup("A", 1).ps
    gamma = (mpq(2),)  # gamma^{alpha^vee} = 4
    M = ps.eta_at(ps.H.Y((2,)), gamma)
    assert M[0][0] == 4 and M[1][1] == mpq(1, 4)
    # column w only involves T_u with u <= w
    assert M[1][0] == 0


@pytest.mark.parametrize("t,n", SMALL)
def test_eta_y_is_triangular(t, n):
    S = setup(t, n)
    ps, rs, W = S.ps, S.rs, S.W
    for lam in [(1,) + (0,) * (n - 1), (0,) * (n - 1) + (1,), (-1,) * n]:
        M = ps.eta(ps.H.Y(lam))
        sat = rs.saturated_set(rs.dominant_rep(lam)[0])
        for c, w in enumerate(ps.basis):
            assert M.rows[c][c] == Laurent.monomial(rs.act(rs.inverse(w), lam))
            for r, u in enumerate(ps.basis):
                f = M.rows[r][c]
                if f:
                    assert W.finite_bruhat_leq(u, w)
                    assert set(f.exponents()) <= sat


@pytest.mark.parametrize("t,n", SMALL)
@given(seed=st.integers(0, 10**6))
def test_eta_is_multiplicative(t, n, seed):
    S = setup(t, n)
    ps = S.ps
    rng = random.Random(seed)
    els = S.W.elements_up_to_length(2)
    a, b = ps.H.T(rng.choice(els)), ps.H.T(rng.choice(els))
    g = random_point(rng, n)
    assert ps.eta_at(a * b, g) == mat_mul(ps.eta_at(a, g), ps.eta_at(b, g))


def test_xi_examples_in_a1():
    ps = setup("A", 1).ps
    e, s1 = ps.basis
    assert ps.xi(e) == [Laurent.constant(1, 1), Laurent()]
    assert ps.xi(s1) == [Laurent.monomial((2,), K - 1 / K), Laurent({(0,): 1, (2,): -1})]


@pytest.mark.parametrize("t,n", SMALL)
def test_xi_are_eigenvectors(t, n):
    S = setup(t, n)
    ps, rs = S.ps, S.rs
    rng = random.Random(1)
    for _ in range(2):
        g = random_point(rng, n)
        for i in range(n):
            lam = rs.fundamental_coweight(i)
            M = ps.eta_at(ps.H.Y(lam), g)
            for w, col in zip(ps.basis, ps.xi_basis()):
                v = [f.evaluate(g) for f in col]
                ev = Laurent.monomial(rs.act(rs.inverse(w), lam)).evaluate(g)
                assert [sum(M[r][c] * v[c] for c in range(ps.dim)) for r in range(ps.dim)] == [ev * x for x in v]


@pytest.mark.parametrize("t,n", SMALL)
def test_xi_basis_is_generically_independent(t, n):
    ps = setup(t, n).ps
    g = random_point(random.Random(7), n)
    assert determinant(ps.xi_matrix_at(g)) != 0
