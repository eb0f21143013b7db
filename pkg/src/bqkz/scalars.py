"""Exact scalars and the parameter field (q, k).

Everything algebraic in the package lives over the rationals.  The
parameter ``q`` is carried through its root ``qbase = q**(1/e)``, where
``e`` is the smallest positive integer clearing the denominators of the
bilinear form on the coweight lattice.  Any power ``q**r`` with
``e*r`` integral is then an exact rational.

The multiplicity label ``k`` is constant on conjugacy classes of simple
affine reflections.  For an irreducible reduced root system those
classes are the root lengths of the gradients, so ``k`` is stored as a
map ``{"long": ..., "short": ...}``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

from gmpy2 import mpq

Rational = type(mpq(0))

LONG = "long"
SHORT = "short"


class BqkzError(Exception):
    """Base class of all package errors."""


class NonIntegralExponent(BqkzError):
    """A power of q was requested outside the lattice (1/e)Z."""


class UnknownLength(BqkzError):
    """A squared root length outside {2, 1, 2/3}."""


class ConfigError(BqkzError):
    """Invalid user supplied parameters."""


def rational(x) -> mpq:
    """Coerce ints, strings like ``"3/4"``, Fractions and mpq to mpq.

    Floats are rejected: all parameters must be given exactly.
    """
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational")
        try:
            if "/" in s:
                p, q = s.split("/")
                return mpq(int(p), int(q))
            return mpq(int(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {x!r}") from exc
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return mpq(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(x) -> str:
    """Serialize as ``"p/q"`` (or ``"p"`` for integers)."""
    x = rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def integer_root(x: mpq, n: int) -> mpq | None:
    """Exact ``n``-th root of a positive rational, or None if irrational."""
    if n == 1:
        return x

    def iroot(m: int) -> int | None:
        lo, hi = 0, 1
        while hi**n <= m:
            hi *= 2
        while lo < hi - 1:
            mid = (lo + hi) // 2
            if mid**n <= m:
                lo = mid
            else:
                hi = mid
        return lo if lo**n == m else None

    p = iroot(int(x.numerator))
    q = iroot(int(x.denominator))
    if p is None or q is None:
        return None
    return mpq(p, q)


@dataclass(frozen=True)
class ParameterField:
    """Exact parameters ``qbase = q**(1/e)`` and ``k`` per root length."""

    qbase: mpq
    e: int
    k: Mapping[str, mpq] = field(default_factory=dict)

    def __post_init__(self):
        qb = rational(self.qbase)
        object.__setattr__(self, "qbase", qb)
        if not (0 < qb < 1):
            raise ConfigError("qbase must lie in (0,1)")
        if self.e < 1:
            raise ConfigError("e must be a positive integer")
        ks = {}
        for cls, val in dict(self.k).items():
            if cls not in (LONG, SHORT):
                raise ConfigError(f"unknown multiplicity class {cls!r}")
            v = rational(val)
            if v == 0:
                raise ConfigError("multiplicity labels must be nonzero")
            ks[cls] = v
        if LONG not in ks:
            raise ConfigError("a value for the long-root class is required")
        ks.setdefault(SHORT, ks[LONG])
        object.__setattr__(self, "k", ks)

    @property
    def q(self) -> mpq:
        return self.qbase**self.e

    def qpow(self, r) -> mpq:
        """Exact value of ``q**r``; requires ``e*r`` integral."""
        n = rational(r) * self.e
        if n.denominator != 1:
            raise NonIntegralExponent(f"q**({r}) is not a power of qbase (e={self.e})")
        return self.qbase ** int(n)

    def q_alpha(self, length_sq) -> mpq:
        """``q_alpha = q**(2/|alpha|**2)``."""
        return self.qpow(2 / _length(length_sq))

    def k_class(self, cls: str) -> mpq:
        return self.k[cls]

    def k_length(self, length_sq) -> mpq:
        """Multiplicity attached to a root of the given squared length."""
        return self.k[length_class(length_sq)]

    def inverted(self) -> ParameterField:
        """Same q, ``k`` replaced by ``1/k``."""
        return ParameterField(self.qbase, self.e, {c: 1 / v for c, v in self.k.items()})

    # Uniform scalar interface shared with the numeric field.
    def coerce(self, x) -> mpq:
        return rational(x)

    def is_zero(self, x) -> bool:
        return x == 0

    def magnitude(self, x) -> float:
        return abs(float(x))

    exact = True


def _length(length_sq) -> mpq:
    lsq = rational(length_sq)
    if lsq not in (2, 1, mpq(2, 3)):
        raise UnknownLength(f"squared root length {length_sq} not in {{2, 1, 2/3}}")
    return lsq


def length_class(length_sq) -> str:
    """``"long"`` for squared length 2, ``"short"`` otherwise."""
    return LONG if _length(length_sq) == 2 else SHORT


def default_qbase(e: int) -> mpq:
    """qbase giving q = 1/4 when that has a rational e-th root, else 1/2."""
    root = integer_root(mpq(1, 4), e)
    return root if root is not None else mpq(1, 2)


def resonance_free(field_: ParameterField, degree: int) -> bool:
    """True when ``q**n * k**2 != 1`` for 1 <= n <= degree and every k.

    The check runs over q_alpha powers of all three possible lengths,
    which is what the series solver divides by.
    """
    for k in field_.k.values():
        for n in range(-degree, degree + 1):
            for m in (1, 2, 3):
                if field_.q ** (n * m) * k * k == 1 and n != 0:
                    return False
    return True
