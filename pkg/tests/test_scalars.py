"""Exact parameters: qpow, q_alpha and validation."""

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from bqkz.scalars import (
    ConfigError,
    NonIntegralExponent,
    ParameterField,
    UnknownLength,
    default_qbase,
    format_rational,
    integer_root,
    rational,
    resonance_free,
)

F = ParameterField(mpq(1, 2), 2, {"long": 3})


def test_qpow_examples():
    assert F.qpow(0) == 1
    assert F.qpow(1) == mpq(1, 4)
    assert F.qpow(mpq(1, 2)) == mpq(1, 2)
    assert F.q == mpq(1, 4)


def test_qpow_rejects_off_lattice():
    with pytest.raises(NonIntegralExponent):
        F.qpow(mpq(1, 3))


def test_q_alpha():
    assert F.q_alpha(2) == F.q
    assert F.q_alpha(1) == F.q**2
    assert F.q_alpha(mpq(2, 3)) == F.q**3
    with pytest.raises(UnknownLength):
        F.q_alpha(3)


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_qpow_is_a_homomorphism(a, b):
    r, s = mpq(a, 2), mpq(b, 2)
    assert F.qpow(r) * F.qpow(s) == F.qpow(r + s)


@given(st.integers(1, 30))
def test_positive_powers_lie_in_unit_interval(n):
    assert 0 < F.qpow(n) < 1


@pytest.mark.parametrize("qb", ["0", "1", "3/2", "-1/2"])
def test_qbase_outside_unit_interval(qb):
    with pytest.raises(ConfigError, match="qbase must lie in"):
        ParameterField(rational(qb), 1, {"long": 3})


def test_k_validation():
    with pytest.raises(ConfigError):
        ParameterField(mpq(1, 2), 1, {"long": 0})
    with pytest.raises(ConfigError):
        ParameterField(mpq(1, 2), 1, {"medium": 2, "long": 1})
    f = ParameterField(mpq(1, 2), 1, {"long": 3})
    assert f.k["short"] == 3
    assert f.inverted().k == {"long": mpq(1, 3), "short": mpq(1, 3)}


def test_rational_parsing_round_trip():
    assert rational("3/4") == mpq(3, 4)
    with pytest.raises(ValueError):
        rational("0.25")  # exact inputs are decimal-free
    assert format_rational(mpq(-6, 4)) == "-3/2"
    assert format_rational(mpq(5)) == "5"


@given(st.integers(1, 50), st.integers(1, 50), st.integers(1, 4))
def test_integer_root(p, q, n):
    x = mpq(p, q)
    assert integer_root(x**n, n) == x


def test_default_qbase_gives_quarter():
    for e in (1, 2):
        assert default_qbase(e) ** e == mpq(1, 4)
    # 1/4 has no rational cube root
    assert default_qbase(3) == mpq(1, 2)


def test_resonance_detection():
    assert resonance_free(ParameterField(mpq(1, 2), 1, {"long": 3}), 4)
    # q k^2 = 1 for q = 1/4, k = 2
    assert not resonance_free(ParameterField(mpq(1, 4), 1, {"long": 2}), 2)
