"""Extended affine Weyl group: action, length, words, Omega and Bruhat order."""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bqkz.affweyl import AffineWeylGroup

from .conftest import SMALL, root_system


def group(t, n):
    return _GROUPS.setdefault((t, n), AffineWeylGroup(root_system(t, n)))


_GROUPS: dict = {}


def test_translation_action_on_roots():
    W = group("A", 1)
    alpha = (0, 0)  # root index 0 at level 0
    assert W.act_root(W.translation((1,)), alpha) == (0, -1)
    for t, n in SMALL:
        G = group(t, n)
        a0 = G.simple_roots[0]
        img = G.act_root(G.simple[0], a0)
        assert img == (G.rs.root_index[G.rs.highest_root], -1)


@pytest.mark.parametrize("t,n", SMALL)
def test_translation_length_formula(t, n):
    W = group(t, n)
    rs = W.rs
    for lam in itertools.product(range(3), repeat=n):
        expected = sum(rs.pairing(lam, b) for b in rs.positive_roots)
        assert W.length(W.translation(lam)) == expected
        assert len(W.inversion_set(W.translation(lam))) == expected


def test_length_examples():
    W = group("A", 2)
    assert W.length(W.translation((1, 0))) == 2
    assert W.length(W.identity) == 0


def test_reduced_word_examples():
    W = group("A", 1)
    assert W.reduced_word_left(W.simple[0]) == (W.identity, (0,))
    om, word = W.reduced_word_left(W.translation((1,)))
    assert word == (1,) and om != W.identity and W.length(om) == 0
    assert W.reduced_word_left(W.translation((2,))) == (W.identity, (0, 1))


def test_omega_examples():
    assert len(group("G", 2).omega_elements) == 1
    W = group("A", 1)
    assert len(W.omega_elements) == 2
    assert W.omega_permutation(W.omega_elements[1]) == (1, 0)
    W = group("A", 2)
    assert len(W.omega_elements) == 3
    perms = {W.omega_permutation(om) for om in W.omega_elements}
    assert perms == {(0, 1, 2), (1, 2, 0), (2, 0, 1)}


@pytest.mark.parametrize("t,n,size", [("B", 2, 2), ("C", 2, 2), ("G", 2, 1)])
def test_omega_order_is_lattice_index(t, n, size):
    assert len(group(t, n).omega_elements) == size


def test_bruhat_examples():
    W = group("A", 1)
    s0, s1 = W.simple
    assert not W.bruhat_leq(s0, s1) and not W.bruhat_leq(s1, s0)
    om = W.omega_elements[1]
    tw = W.translation((1,))
    assert W.mul(om, s1) == tw
    assert W.bruhat_leq(om, tw)
    assert not W.bruhat_leq(s0, tw)
    for w in W.elements_up_to_length(3):
        if W.omega_part(w) == W.identity:
            assert W.bruhat_leq(W.identity, w)


@pytest.mark.parametrize("t,n", SMALL)
def test_length_is_subadditive(t, n):
    W = group(t, n)
    els = W.elements_up_to_length(3 if n == 2 else 6)
    for a, b in itertools.product(els[:: max(1, len(els) // 25)], repeat=2):
        ab = W.mul(a, b)
        assert W.length(ab) <= W.length(a) + W.length(b)
        assert len(W.reduced_word(ab)[0]) == W.length(ab)


@pytest.mark.parametrize("t,n", SMALL)
@given(data=st.data())
def test_reduced_word_round_trip(t, n, data):
    W = group(t, n)
    lam = tuple(data.draw(st.lists(st.integers(-2, 2), min_size=n, max_size=n)))
    v = data.draw(st.sampled_from(W.rs.weyl_group()))
    w = W.mul(W.translation(lam), W.finite(v))
    word, om = W.reduced_word(w)
    assert W.from_word(word, om, omega_left=False) == w
    om2, word2 = W.reduced_word_left(w)
    assert W.from_word(word2, om2) == w
    assert W.mul(W.inv(w), w) == W.identity


@pytest.mark.parametrize("t,n", SMALL)
@given(data=st.data())
def test_group_law_is_associative(t, n, data):
    W = group(t, n)
    els = W.elements_up_to_length(3)
    a, b, c = (data.draw(st.sampled_from(els)) for _ in range(3))
    assert W.mul(W.mul(a, b), c) == W.mul(a, W.mul(b, c))


@pytest.mark.parametrize("t,n,classes", [
    # B2 has alpha_1 long, C2 and G2 have alpha_2 long
    ("A", 1, [{0, 1}]), ("A", 2, [{0, 1, 2}]), ("B", 2, [{0, 1}, {2}]),
    ("C", 2, [{0, 2}, {1}]), ("G", 2, [{0, 2}, {1}]),
])
def test_reflection_classes_match_length_classes(t, n, classes):
    W = group(t, n)
    found = W.reflection_classes()
    assert sorted(map(sorted, found)) == sorted(map(sorted, classes))
    for cls in found:
        assert len({W.simple_class(i) for i in cls}) == 1


@pytest.mark.parametrize("t,n", SMALL)
def test_finite_bruhat_is_subword_order(t, n):
    W = group(t, n)
    rs = W.rs
    W0 = rs.weyl_group()

    def subwords(word):
        out = set()
        for mask in itertools.product((0, 1), repeat=len(word)):
            out.add(rs.from_word([i for i, m in zip(word, mask) if m]).mat)
        return out

    for v in W0:
        below = subwords(rs.word(v))
        for u in W0:
            assert W.finite_bruhat_leq(u, v) == (u.mat in below)
