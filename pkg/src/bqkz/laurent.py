"""Laurent polynomials over P^vee with exact rational coefficients.

A monomial ``x^lam`` is keyed by the coweight coordinates of ``lam``;
evaluation at a torus point ``t`` uses ``t^lam = prod_i t_i^{lam_i}``
with ``t_i = t^{varpi_i^vee}``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .rootdata import Vec


class Laurent:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Vec, object] | None = None):
        self.terms: dict = {}
        if terms:
            for k, v in terms.items():
                if v != 0:
                    self.terms[tuple(k)] = v

    @classmethod
    def monomial(cls, lam: Sequence[int], coeff=1) -> Laurent:
        out = cls()
        if coeff != 0:
            out.terms[tuple(lam)] = mpq(coeff)
        return out

    @classmethod
    def constant(cls, c, rank: int) -> Laurent:
        return cls.monomial((0,) * rank, c)

    def copy(self) -> Laurent:
        out = Laurent()
        out.terms = dict(self.terms)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Laurent):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = [f"{c}*x^{k}" for k, c in sorted(self.terms.items())]
        return " + ".join(parts)

    def iadd(self, other: Laurent, scale=1) -> Laurent:
        t = self.terms
        for k, v in other.terms.items():
            nv = t.get(k, 0) + scale * v
            if nv:
                t[k] = nv
            else:
                t.pop(k, None)
        return self

    def add_term(self, lam: Vec, c) -> None:
        t = self.terms
        nv = t.get(lam, 0) + c
        if nv:
            t[lam] = nv
        else:
            t.pop(lam, None)

    def __add__(self, other: Laurent) -> Laurent:
        return self.copy().iadd(other)

    def __sub__(self, other: Laurent) -> Laurent:
        return self.copy().iadd(other, -1)

    def __neg__(self) -> Laurent:
        return Laurent({k: -v for k, v in self.terms.items()})

    def scale(self, c) -> Laurent:
        if c == 0:
            return Laurent()
        out = Laurent()
        out.terms = {k: c * v for k, v in self.terms.items()}
        return out

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            return self.scale(other)
        out = Laurent()
        t = out.terms
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                nv = t.get(k, 0) + v1 * v2
                if nv:
                    t[k] = nv
                else:
                    t.pop(k, None)
        return out

    __rmul__ = __mul__

    def shift(self, lam: Sequence[int]) -> Laurent:
        """Multiply by the monomial ``x^lam``."""
        out = Laurent()
        out.terms = {tuple(a + b for a, b in zip(k, lam)): v for k, v in self.terms.items()}
        return out

    def act(self, mat) -> Laurent:
        """``(w f)(x^lam) = x^{w lam}`` for w given by its coweight matrix."""
        out = Laurent()
        for k, v in self.terms.items():
            out.add_term(tuple(sum(a * b for a, b in zip(row, k)) for row in mat), v)
        return out

    def map_exponents(self, fn) -> Laurent:
        out = Laurent()
        for k, v in self.terms.items():
            out.add_term(tuple(fn(k)), v)
        return out

    def exponents(self) -> Iterable[Vec]:
        return self.terms.keys()

    def constant_term(self):
        for k, v in self.terms.items():
            if not any(k):
                return v
        return mpq(0)

    def evaluate(self, point: Sequence, field=None):
        """Value at the torus point with coordinates ``point[i] = t^{varpi_i}``."""
        total = 0
        powcache: dict = {}
        for k, v in self.terms.items():
            term = v if field is None else field.coerce(v)
            for i, e in enumerate(k):
                if e:
                    key = (i, e)
                    p = powcache.get(key)
                    if p is None:
                        p = point[i] ** e
                        powcache[key] = p
                    term = term * p
            total = total + term
        return total


def monomial_value(lam: Sequence[int], point: Sequence):
    out = 1
    for e, t in zip(lam, point):
        if e:
            out = out * t**e
    return out
