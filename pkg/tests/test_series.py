"""Truncated bigraded series and the expansions of A_i, B_j."""

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from bqkz.linalg import identity, mat_add, max_abs
from bqkz.series import MatrixSeries, NonUnitConstantTerm

from .conftest import SMALL, setup


def grading():
    return setup("A", 1).expander.grading


def scalar_series(coeffs, degree=4):
    return MatrixSeries(grading(), 1, degree, {((0,), (2 * b,)): [[mpq(c)]] for b, c in coeffs.items()})


def test_geometric_series_inverse():
    D = 5
    one_plus_m = scalar_series({0: 1, 1: 1}, D)
    inv = one_plus_m.invert_unit()
    assert {k[1][0] // 2: m[0][0] for k, m in inv.coeffs.items()} == {n: (-1) ** n for n in range(D + 1)}
    assert (one_plus_m * inv).coeffs == MatrixSeries.identity(grading(), 1, D).coeffs


def test_non_unit_constant_term():
    with pytest.raises(NonUnitConstantTerm):
        scalar_series({1: 1}).invert_unit()


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5), st.lists(st.integers(-5, 5), min_size=1, max_size=5))
def test_multiplication_is_commutative_for_scalars(a, b):
    x = scalar_series(dict(enumerate(a)))
    y = scalar_series(dict(enumerate(b)))
    assert (x * y).coeffs == (y * x).coeffs
    assert ((x + y) - y).coeffs == x.coeffs


def test_truncation_drops_high_grades():
    x = scalar_series({0: 1, 1: 2, 3: 4}, 4).truncate(2)
    assert set(x.coeffs) == {((0,), (0,)), ((0,), (2,))}


@pytest.mark.parametrize("t,n", SMALL)
def test_expansions_are_nonnegative(t, n):
    S = setup(t, n)
    ex = S.expander
    D = 2 if t == "G" else 3
    for i in range(n):
        assert ex.expand_gauged_a(i, D).is_nonnegative()
        assert ex.expand_gauged_b(i, D).is_nonnegative()


@pytest.mark.parametrize("t,n", SMALL)
def test_constant_terms_are_asymptotic_idempotents(t, n):
    S = setup(t, n)
    As, Bs = S.co.asymptotic_constants()
    for i in range(n):
        assert S.expander.expand_gauged_a(i, 1).constant_term() == As[i]
        assert S.expander.expand_gauged_b(i, 1).constant_term() == Bs[i]


@pytest.mark.parametrize("t,n", SMALL)
def test_b_series_from_a_by_iota(t, n):
    S = setup(t, n)
    ex = S.expander
    for j in range(n):
        assert ex.expand_gauged_b(j, 2).coeffs == ex.expand_gauged_b_direct(j, 2).coeffs


@pytest.mark.parametrize("which", ["A", "B"])
def test_series_error_scales_with_truncation_order(which):
    S = setup("A", 1)
    co, ex = S.co, S.expander
    D = 4
    series = ex.expand_gauged_a(0, D) if which == "A" else ex.expand_gauged_b(0, D)
    lam, mu = ((1,), (0,)) if which == "A" else ((0,), (1,))
    errs = []
    for x in (40, 80):  # u = v = 1/x^2
        t, g = (mpq(x),), (mpq(1, x),)
        errs.append(max_abs(mat_add(co.gauged(lam, mu, t, g), series.evaluate(t, g), -1)))
    # halving the depth in each variable divides the error by 4^(D+1) = 1024
    assert errs[0] / errs[1] > 4 ** (D + 0.5)


def test_a1_a_series_grade_one_entries():
    S = setup("A", 1)
    A = S.expander.expand_gauged_a(0, 1)
    assert A.constant_term() == S.co.asymptotic_constants()[0][0]
    assert all(S.expander.grading.grade(k) <= 1 for k in A.coeffs)
    assert A.evaluate((mpq(10**6),), (mpq(10**-6),)) != identity(2)
