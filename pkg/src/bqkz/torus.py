"""Torus points and the affine Weyl group action on them.

Points are tuples ``(t_1, ..., t_N)`` with ``t_i = t^{varpi_i^vee}``.  The
scalar field supplies ``q`` powers and ``k`` values, so the same code runs
exactly over the rationals or numerically.
"""

from __future__ import annotations

from collections.abc import Sequence

from .affweyl import AffElem, AffineRoot, AffineWeylGroup
from .rootdata import FiniteWeylElem

Point = tuple


class Torus:
    """Characters, shifts and Weyl group action for one root system."""

    def __init__(self, W: AffineWeylGroup, field):
        self.W = W
        self.rs = W.rs
        self.field = field
        f = field
        self.kvals = tuple(f.k[W.simple_class(i)] for i in range(W.N + 1))
        self.one = f.coerce(1)
        self.zero = f.coerce(0)
        self._shift_cache: dict = {}
        self._weyl_cache: dict = {}

    def char(self, point: Sequence, lam: Sequence[int]):
        out = self.one
        for c, x in zip(lam, point):
            if c:
                out = out * x**c
        return out

    def char_affine(self, point: Sequence, a: AffineRoot):
        """``t^{a^vee} = q_alpha^r t^{alpha^vee}``."""
        cor, level = self.W.affine_coroot(a)
        return self.field.qpow(level) * self.char(point, cor)

    def shift(self, point: Sequence, lam: Sequence[int]) -> Point:
        """``q^lam t``: coordinate i multiplied by ``q^{<lam, varpi_i>}``."""
        if not any(lam):
            return tuple(point)
        key = tuple(lam)
        facs = self._shift_cache.get(key)
        if facs is None:
            rs = self.rs
            facs = tuple(self.field.qpow(rs.inner(lam, rs.fundamental_coweight(i))) for i in range(rs.rank))
            self._shift_cache[key] = facs
        return tuple(x * f for x, f in zip(point, facs))

    def weyl_act(self, w: FiniteWeylElem, point: Sequence) -> Point:
        """``(w t)^mu = t^{w^{-1} mu}``."""
        exps = self._weyl_cache.get(w.mat)
        if exps is None:
            rs = self.rs
            winv = rs.inverse(w)
            exps = tuple(rs.act(winv, rs.fundamental_coweight(i)) for i in range(rs.rank))
            self._weyl_cache[w.mat] = exps
        return tuple(self.char(point, e) for e in exps)

    def act_point(self, w: AffElem, point: Sequence) -> Point:
        """``t(lam) v`` acting on T: ``q^lam (v t)``."""
        return self.shift(self.weyl_act(w.fin, point), w.lam)

    def act_point_diamond(self, w: AffElem, point: Sequence) -> Point:
        """The diamond action on the spectral torus: ``t(lam) -> t(-lam)``."""
        return self.shift(self.weyl_act(w.fin, point), tuple(-x for x in w.lam))

    def inv_point(self, point: Sequence) -> Point:
        return tuple(1 / x for x in point)

    def delta_k(self) -> Point:
        """``(delta_k)_i = prod_{alpha > 0} k_alpha^{<varpi_i, alpha>}``."""
        rs = self.rs
        out = []
        for i in range(rs.rank):
            v = self.one
            for beta in rs.positive_roots:
                if beta[i]:
                    v = v * self.field.k[rs.root_class(beta)] ** beta[i]
            out.append(v)
        return tuple(out)

    def delta_pow(self, lam: Sequence[int]):
        return self.char(self.delta_k(), lam)
