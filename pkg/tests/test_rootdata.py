"""Root systems, finite Weyl groups and orbit combinatorics."""

import itertools

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from bqkz.affweyl import AffineWeylGroup
from bqkz.rootdata import NotDominant, RootSystem, all_types

from .conftest import SMALL, root_system

POSITIVE_COUNTS = {("A", 1): 1, ("A", 2): 3, ("B", 2): 4, ("C", 2): 4, ("G", 2): 6,
                   ("A", 3): 6, ("B", 3): 9, ("D", 4): 12, ("F", 4): 24, ("E", 6): 36}
WEYL_ORDERS = {("A", 1): 2, ("A", 2): 6, ("B", 2): 8, ("C", 2): 8, ("G", 2): 12, ("A", 3): 24, ("B", 3): 48}


def weights(rank, bound=2):
    return st.lists(st.integers(-bound, bound), min_size=rank, max_size=rank).map(tuple)


@pytest.mark.parametrize("t,n", list(POSITIVE_COUNTS))
def test_positive_root_count(t, n):
    assert len(RootSystem(t, n).positive_roots) == POSITIVE_COUNTS[(t, n)]


@pytest.mark.parametrize("t,n", list(WEYL_ORDERS))
def test_weyl_group_order(t, n):
    rs = RootSystem(t, n)
    assert rs.order == WEYL_ORDERS[(t, n)]
    assert rs.length(rs.longest_element) == rs.npos


@pytest.mark.parametrize("t,n", list(POSITIVE_COUNTS))
def test_highest_root(t, n):
    rs = RootSystem(t, n)
    phi = rs.highest_root
    assert rs.root_length_sq(phi) == 2
    for beta in rs.positive_roots:
        assert all(a >= b for a, b in zip(phi, beta))


@pytest.mark.parametrize("t,n", list(POSITIVE_COUNTS))
def test_coroots_lie_in_coweight_lattice(t, n):
    rs = RootSystem(t, n)
    for cor in rs.coroots:
        assert all(isinstance(c, int) for c in cor)
        assert rs.in_coroot_lattice(cor)


def test_all_types_enumerates_e8():
    assert ("E", 8) in all_types(8)
    assert len(RootSystem("E", 8).positive_roots) == 120


def test_pairing_examples():
    a1 = root_system("A", 1)
    w = a1.fundamental_coweight(0)
    assert a1.pairing(w, (1,)) == 1
    assert a1.inner(w, w) == mpq(1, 2)
    a2 = root_system("A", 2)
    assert a2.pairing(a2.fundamental_coweight(0), (1, 1)) == 1


def test_reflection_examples():
    a1 = root_system("A", 1)
    assert a1.act(a1.simple_reflections[0], (1,)) == (-1,)
    a2 = root_system("A", 2)
    w0 = a2.longest_element
    assert a2.length(w0) == 3
    assert a2.act_root(w0, (1, 0)) == (0, -1)
    for t, n in SMALL:
        rs = root_system(t, n)
        assert rs.mul(rs.longest_element, rs.longest_element) == rs.identity


def test_dominant_rep_examples():
    a1 = root_system("A", 1)
    assert a1.dominant_rep((1,)) == ((1,), a1.identity)
    assert a1.dominant_rep((-1,)) == ((1,), a1.simple_reflections[0])
    a2 = root_system("A", 2)
    s1 = a2.simple_reflections[0]
    lam = a2.act(s1, (1, 0))
    assert lam == (-1, 1)
    assert a2.dominant_rep(lam) == ((1, 0), s1)


@pytest.mark.parametrize("t,n", SMALL)
def test_dominant_rep_is_shortest(t, n):
    rs = root_system(t, n)
    for lam in itertools.product(range(-2, 3), repeat=n):
        lp, v = rs.dominant_rep(lam)
        assert rs.is_dominant(lp) and rs.act(v, lp) == lam
        shortest = min(rs.length(w) for w in rs.weyl_group() if rs.act(w, lp) == lam)
        assert rs.length(v) == shortest


def test_saturated_set_examples():
    a1 = root_system("A", 1)
    assert a1.saturated_set((1,)) == {(1,), (-1,)}
    assert a1.saturated_set((2,)) == {(2,), (0,), (-2,)}
    a2 = root_system("A", 2)
    assert a2.saturated_set((1, 0)) == set(a2.orbit((1, 0)))
    assert len(a2.orbit((1, 0))) == 3


@pytest.mark.parametrize("t,n", SMALL)
def test_minuscule_saturated_set_is_orbit(t, n):
    rs = root_system(t, n)
    for j in AffineWeylGroup(rs).minuscule:
        om = rs.fundamental_coweight(j)
        assert rs.saturated_set(om) == set(rs.orbit(om))


def test_dominance_examples():
    a1 = root_system("A", 1)
    assert a1.dominance_leq((0,), (2,))
    assert a1.dominance_leq((2,), (2,))
    assert not a1.dominance_leq((2,), (0,))
    with pytest.raises(NotDominant):
        a1.dominance_leq((-1,), (1,))
    a2 = root_system("A", 2)
    W = AffineWeylGroup(a2)
    s1lam = a2.act(a2.simple_reflections[0], (1, 0))
    w0lam = a2.act(a2.longest_element, (1, 0))
    assert W.extended_order_geq(w0lam, s1lam)
    assert not W.extended_order_geq(s1lam, w0lam)
    assert W.extended_order_geq(s1lam, s1lam)


@pytest.mark.parametrize("t,n", SMALL)
@given(data=st.data())
def test_inner_product_is_weyl_invariant(t, n, data):
    rs = root_system(t, n)
    lam, mu = data.draw(weights(n)), data.draw(weights(n))
    w = data.draw(st.sampled_from(rs.weyl_group()))
    assert rs.inner(rs.act(w, lam), rs.act(w, mu)) == rs.inner(lam, mu)
    assert rs.inner(lam, mu) == rs.inner(mu, lam)
    assert (rs.e * rs.inner(lam, mu)).denominator == 1


@pytest.mark.parametrize("t,n", SMALL)
@given(data=st.data())
def test_saturated_sets_are_weyl_invariant(t, n, data):
    rs = root_system(t, n)
    lam = data.draw(weights(n, 1))
    w = data.draw(st.sampled_from(rs.weyl_group()))
    sat = rs.saturated_set(lam)
    assert sat == rs.saturated_set(rs.act(w, lam))
    lp = rs.dominant_rep(lam)[0]
    for mu in sat:
        assert rs.saturated_set(rs.dominant_rep(mu)[0]) <= rs.saturated_set(lp)


@pytest.mark.parametrize("t,n", SMALL)
@given(data=st.data())
def test_dominant_minus_orbit_is_positive(t, n, data):
    rs = root_system(t, n)
    lp = rs.dominant_rep(data.draw(weights(n)))[0]
    w = data.draw(st.sampled_from(rs.weyl_group()))
    diff = tuple(a - b for a, b in zip(lp, rs.act(w, lp)))
    coords = rs.coroot_coords(diff)
    assert all(c >= 0 and c.denominator == 1 for c in coords)
