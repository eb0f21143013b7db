"""The extended affine Hecke algebra H(k).

Three representations are used:

* :class:`HeckeElem` -- the ``T_w`` basis, ``w`` in the extended affine
  Weyl group.
* :class:`BernsteinElem` -- ``sum_u T_u f_u(Y)`` with ``u`` in W0 and
  ``f_u`` a Laurent polynomial.
* :class:`DoubleElem` -- normal ordered ``X^lam T_u Y^mu`` terms, enough
  to express the duality anti-involution on the span this package needs.

Quadratic relation: ``(T_i - k_i)(T_i + 1/k_i) = 0``.
Lusztig relation, with ``Delta_j f = (f - s_j f)/(1 - Y^{-alpha_j^vee})``:
``f(Y) T_j = T_j (s_j f)(Y) + (k_j - 1/k_j) Delta_j f``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .affweyl import AffElem, AffineWeylGroup
from .laurent import Laurent
from .rootdata import FiniteWeylElem, Vec
from .scalars import BqkzError, rational


class OutsideSupportedSpan(BqkzError):
    """A double-algebra product needs relations that are not implemented."""


def _acc(d: dict, key, val) -> None:
    nv = d.get(key, 0) + val
    if nv:
        d[key] = nv
    else:
        d.pop(key, None)


def divided_difference(lam: Vec, n: int, cor: Vec, sign: int) -> Laurent:
    """``(x^lam - x^{lam - n a})/(1 - x^{sign a})`` with ``a`` given by ``cor``.

    ``n`` must be ``<lam, alpha>`` so the quotient is a Laurent polynomial;
    it is evaluated by a telescoping geometric sum.
    """
    out = Laurent()
    m = sign * n

    def mono(r):  # x^lam * y^r with y = x^{sign a}
        return tuple(l + sign * r * c for l, c in zip(lam, cor))

    if m > 0:
        for r in range(1, m + 1):
            out.add_term(mono(-r), mpq(-1))
    elif m < 0:
        for r in range(-m):
            out.add_term(mono(r), mpq(1))
    return out


class HeckeElem:
    """Element of H(k) in the ``T_w`` basis."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: HeckeAlgebra, terms: Mapping[AffElem, object] | None = None):
        self.alg = alg
        self.terms: dict = {}
        if terms:
            for w, c in terms.items():
                if c != 0:
                    self.terms[w] = mpq(c)

    def _new(self, terms):
        out = HeckeElem(self.alg)
        out.terms = terms
        return out

    def __add__(self, other: HeckeElem) -> HeckeElem:
        t = dict(self.terms)
        for w, c in other.terms.items():
            _acc(t, w, c)
        return self._new(t)

    def __sub__(self, other: HeckeElem) -> HeckeElem:
        t = dict(self.terms)
        for w, c in other.terms.items():
            _acc(t, w, -c)
        return self._new(t)

    def __neg__(self) -> HeckeElem:
        return self._new({w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElem):
            return self.alg.mul(self, other)
        c = rational(other)
        if c == 0:
            return self._new({})
        return self._new({w: c * v for w, v in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other) -> bool:
        if isinstance(other, HeckeElem):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"HeckeElem({len(self.terms)} terms)"

    def coefficient(self, w: AffElem):
        return self.terms.get(w, mpq(0))

    def is_finite(self) -> bool:
        """True when every ``T_w`` has ``w`` in W0."""
        z = self.alg.rs.zero()
        return all(w.lam == z for w in self.terms)


class BernsteinElem:
    """``sum_u T_u f_u(Y)``; ``terms`` maps u in W0 to a Laurent polynomial."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: HeckeAlgebra, terms: Mapping[FiniteWeylElem, Laurent] | None = None):
        self.alg = alg
        self.terms: dict = {}
        if terms:
            for u, f in terms.items():
                if f:
                    self.terms[u] = f

    def _new(self, terms):
        out = BernsteinElem(self.alg)
        out.terms = {u: f for u, f in terms.items() if f}
        return out

    def __add__(self, other: BernsteinElem) -> BernsteinElem:
        t = {u: f.copy() for u, f in self.terms.items()}
        for u, f in other.terms.items():
            if u in t:
                t[u].iadd(f)
            else:
                t[u] = f.copy()
        return self._new(t)

    def __sub__(self, other: BernsteinElem) -> BernsteinElem:
        return self + other * (-1)

    def __mul__(self, other):
        if isinstance(other, BernsteinElem):
            return self.alg.bern_mul(self, other)
        c = rational(other)
        return self._new({u: f.scale(c) for u, f in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other) -> bool:
        if isinstance(other, BernsteinElem):
            return self.terms == other.terms
        return NotImplemented

    def __repr__(self) -> str:
        return f"BernsteinElem({ {self.alg.rs.word(u): f for u, f in self.terms.items()} })"

    def coefficient(self, u: FiniteWeylElem) -> Laurent:
        return self.terms.get(u, Laurent())


class HeckeAlgebra:
    """H(k) for a root system; ``k`` maps "long"/"short" to nonzero rationals."""

    def __init__(self, W: AffineWeylGroup, k: Mapping[str, object]):
        self.W = W
        self.rs = W.rs
        self.N = W.N
        self.kmap = {c: rational(v) for c, v in k.items()}
        self.kmap.setdefault("short", self.kmap["long"])
        self.kvals = tuple(self.kmap[W.simple_class(i)] for i in range(self.N + 1))
        self.kdiff = tuple(k - 1 / k for k in self.kvals)
        self._fin_mul: dict = {}
        self._push: dict = {}
        self._bern_T: dict = {}
        self._xpush: dict = {}
        self._check_T0()

    def inverted(self) -> HeckeAlgebra:
        """H(1/k) over the same affine Weyl group."""
        return HeckeAlgebra(self.W, {c: 1 / v for c, v in self.kmap.items()})

    def _check_T0(self) -> None:
        W = self.W
        tphi = W.translation(W.phi_vee)
        sphi = W.finite(W.s_phi)
        assert W.mul(W.simple[0], sphi) == tphi
        assert W.length(tphi) == 1 + W.length(sphi), "t(phi^vee) = s_0 s_phi is not reduced"
        for om in W.omega_elements[1:]:
            assert W.length(om) == 0

    # ------------------------------------------------------------------
    # T basis
    def one(self) -> HeckeElem:
        return HeckeElem(self, {self.W.identity: 1})

    def zero(self) -> HeckeElem:
        return HeckeElem(self)

    def T(self, w: AffElem) -> HeckeElem:
        return HeckeElem(self, {w: 1})

    def Ti(self, i: int) -> HeckeElem:
        return self.T(self.W.simple[i])

    def Tfin(self, u: FiniteWeylElem) -> HeckeElem:
        return self.T(self.W.finite(u))

    def _lmul_gen(self, terms: dict, i: int) -> dict:
        W = self.W
        s = W.simple[i]
        kd = self.kdiff[i]
        out: dict = {}
        for w, c in terms.items():
            sw = W.mul(s, w)
            if W.length(sw) > W.length(w):
                _acc(out, sw, c)
            else:
                _acc(out, w, kd * c)
                _acc(out, sw, c)
        return out

    def _lmul_inv_gen(self, terms: dict, i: int) -> dict:
        out = self._lmul_gen(terms, i)
        kd = self.kdiff[i]
        for w, c in terms.items():
            _acc(out, w, -kd * c)
        return out

    def _lmul_omega(self, terms: dict, om: AffElem) -> dict:
        W = self.W
        return {W.mul(om, w): c for w, c in terms.items()}

    def _lmul_word(self, terms: dict, w: AffElem) -> dict:
        om, word = self.W.reduced_word_left(w)
        for i in reversed(word):
            terms = self._lmul_gen(terms, i)
        return self._lmul_omega(terms, om)

    def mul(self, a: HeckeElem, b: HeckeElem) -> HeckeElem:
        out: dict = {}
        for w, c in a.terms.items():
            for x, v in self._lmul_word(b.terms, w).items():
                _acc(out, x, c * v)
        return HeckeElem(self, out)

    def inverse_T(self, w: AffElem) -> HeckeElem:
        """``T_w^{-1} = T_{il}^{-1} ... T_{i1}^{-1} omega^{-1}``."""
        W = self.W
        om, word = W.reduced_word_left(w)
        terms = {W.inv(om): mpq(1)}
        for i in word:
            terms = self._lmul_inv_gen(terms, i)
        return HeckeElem(self, terms)

    def inverseTw(self, w: AffElem) -> HeckeElem:
        return self.inverse_T(w)

    def dominant_split(self, lam: Sequence[int]) -> tuple[Vec, Vec]:
        """``lam = mu - nu`` with mu, nu dominant and disjoint supports."""
        mu = tuple(max(c, 0) for c in lam)
        nu = tuple(max(-c, 0) for c in lam)
        return mu, nu

    def Y(self, lam: Sequence[int]) -> HeckeElem:
        """``Y^lam = T_{t(mu)} T_{t(nu)}^{-1}``."""
        mu, nu = self.dominant_split(lam)
        W = self.W
        out = self.T(W.translation(mu))
        if any(nu):
            out = out * self.inverse_T(W.translation(nu))
        return out

    def yElement(self, lam) -> HeckeElem:
        return self.Y(lam)

    def monomial_symmetric(self, lam: Sequence[int]) -> HeckeElem:
        """``m_lam(Y) = sum over the W0-orbit of lam``."""
        out = self.zero()
        for mu in self.rs.orbit(lam):
            out = out + self.Y(mu)
        return out

    # ------------------------------------------------------------------
    # finite Hecke algebra
    def fin_mul(self, u: FiniteWeylElem, x: FiniteWeylElem) -> dict:
        """``T_u T_x`` as {y: coeff} inside H0."""
        key = (u, x)
        hit = self._fin_mul.get(key)
        if hit is None:
            rs = self.rs
            terms = {x: mpq(1)}
            for i in reversed(rs.word(u)):
                terms = self._fin_lmul_gen(terms, i + 1)
            hit = terms
            self._fin_mul[key] = hit
        return hit

    def _fin_lmul_gen(self, terms: dict, i: int) -> dict:
        """Left multiplication by ``T_i`` (1 <= i <= N) on finite terms."""
        rs = self.rs
        s = rs.simple_reflections[i - 1]
        kd = self.kdiff[i]
        out: dict = {}
        for w, c in terms.items():
            sw = rs.mul(s, w)
            if rs.length(sw) > rs.length(w):
                _acc(out, sw, c)
            else:
                _acc(out, w, kd * c)
                _acc(out, sw, c)
        return out

    def fin_inverse(self, u: FiniteWeylElem) -> dict:
        """``T_u^{-1}`` inside H0."""
        terms = {self.rs.identity: mpq(1)}
        for i in self.rs.word(u):
            nxt = self._fin_lmul_gen(terms, i + 1)
            kd = self.kdiff[i + 1]
            for w, c in terms.items():
                _acc(nxt, w, -kd * c)
            terms = nxt
        return terms

    # ------------------------------------------------------------------
    # Bernstein form
    def bern(self, terms: Mapping[FiniteWeylElem, Laurent]) -> BernsteinElem:
        return BernsteinElem(self, terms)

    def bern_one(self) -> BernsteinElem:
        return self.bern({self.rs.identity: Laurent.monomial(self.rs.zero())})

    def bern_Y(self, lam: Sequence[int], c=1) -> BernsteinElem:
        return self.bern({self.rs.identity: Laurent.monomial(lam, c)})

    def bern_fin(self, terms: Mapping[FiniteWeylElem, object]) -> BernsteinElem:
        z = self.rs.zero()
        return self.bern({u: Laurent.monomial(z, c) for u, c in terms.items()})

    def bern_poly(self, f: Laurent) -> BernsteinElem:
        """``f(Y)`` as a Bernstein element."""
        return self.bern({self.rs.identity: f.copy()})

    def lusztig_delta(self, lam: Vec, j: int) -> Laurent:
        """``(k_j - 1/k_j)(x^lam - x^{s_j lam})/(1 - x^{-alpha_j^vee})``, j in 1..N."""
        rs = self.rs
        n = lam[j - 1]
        return divided_difference(lam, n, rs.simple_coroots[j - 1], -1).scale(self.kdiff[j])

    def push(self, lam: Vec, v: FiniteWeylElem) -> dict:
        """``Y^lam T_v`` rewritten as {u: Laurent} in Bernstein order."""
        key = (lam, v)
        hit = self._push.get(key)
        if hit is not None:
            return hit
        rs = self.rs
        word = rs.word(v)
        if not word:
            hit = {v: Laurent.monomial(lam)}
        else:
            j = word[0]
            rest = rs.from_word(word[1:])
            s = rs.simple_reflections[j]
            out: dict = {}
            # T_j (s_j x^lam) T_rest
            for u, f in self.push(rs.act(s, lam), rest).items():
                for y, c in self._fin_lmul_gen({u: mpq(1)}, j + 1).items():
                    _add_laurent(out, y, f, c)
            for mu, c in self.lusztig_delta(lam, j + 1).terms.items():
                for u, f in self.push(mu, rest).items():
                    _add_laurent(out, u, f, c)
            hit = {u: f for u, f in out.items() if f}
        self._push[key] = hit
        return hit

    def bern_mul(self, a: BernsteinElem, b: BernsteinElem) -> BernsteinElem:
        out: dict = {}
        for v, g in b.terms.items():
            for u, f in a.terms.items():
                # T_u f(Y) T_v g(Y)
                for lam, c in f.terms.items():
                    for y, h in self.push(lam, v).items():
                        hg = h * g
                        for z, d in self.fin_mul(u, y).items():
                            _add_laurent(out, z, hg, c * d)
        return BernsteinElem(self, {u: f for u, f in out.items() if f})

    @property
    def bern_generators(self) -> dict:
        """Bernstein images of T_0 and of the Omega elements."""
        hit = self._bern_T.get("gens")
        if hit is None:
            W = self.W
            rs = self.rs
            gens = {}
            t0 = self.bern_Y(W.phi_vee) * self.bern_fin(self.fin_inverse(W.s_phi))
            gens[0] = t0
            for n, j in enumerate(W.minuscule, start=1):
                om = W.omega_elements[n]
                vj = W.omega_v(j)
                gens[om] = self.bern_Y(rs.fundamental_coweight(j)) * self.bern_fin(self.fin_inverse(vj))
            gens[W.identity] = self.bern_one()
            hit = gens
            self._bern_T["gens"] = hit
        return hit

    def bern_T(self, w: AffElem) -> BernsteinElem:
        """Bernstein form of ``T_w``."""
        hit = self._bern_T.get(w)
        if hit is None:
            W = self.W
            if not any(w.lam):
                hit = self.bern_fin({w.fin: mpq(1)})
            else:
                om, word = W.reduced_word_left(w)
                gens = self.bern_generators
                hit = gens[om]
                for i in word:
                    g = gens[0] if i == 0 else self.bern_fin({self.rs.simple_reflections[i - 1]: mpq(1)})
                    hit = hit * g
            self._bern_T[w] = hit
        return hit

    def to_bernstein(self, h: HeckeElem) -> BernsteinElem:
        out = BernsteinElem(self)
        for w, c in h.terms.items():
            out = out + self.bern_T(w) * c
        return out

    def toBernstein(self, h):
        return self.to_bernstein(h)

    def from_bernstein(self, b: BernsteinElem) -> HeckeElem:
        out = self.zero()
        for u, f in b.terms.items():
            Tu = self.Tfin(u)
            for lam, c in f.terms.items():
                out = out + (Tu * self.Y(lam)) * c
        return out

    # ------------------------------------------------------------------
    # intertwiners and the circ map
    def intertwiner_dual_simple(self, i: int) -> BernsteinElem:
        """``T_i (1 - Y^{alpha_i^vee}) + (k_i - 1/k_i) Y^{alpha_i^vee}``, i in 1..N."""
        rs = self.rs
        cor = rs.simple_coroots[i - 1]
        z = rs.zero()
        return self.bern({
            rs.simple_reflections[i - 1]: Laurent({z: mpq(1), cor: mpq(-1)}),
            rs.identity: Laurent.monomial(cor, self.kdiff[i]),
        })

    def intertwiner_dual(self, w: FiniteWeylElem, word: Sequence[int] | None = None) -> BernsteinElem:
        """The element used by xi_w: product of the simple dual intertwiners along a
        reduced word ``(j1, ..., jr)`` of w, in that order."""
        if word is None:
            word = self.rs.word(w)
        out = self.bern_one()
        for j in word:
            out = out * self.intertwiner_dual_simple(j + 1)
        return out

    def intertwinerDual(self, w):
        return self.intertwiner_dual(w)

    def circ_map(self, h: HeckeElem) -> HeckeElem:
        """H(1/k) -> H(k): ``T_i -> T_i^{-1}``, ``omega -> omega``.

        ``h`` must belong to the algebra with inverted parameters.
        """
        W = self.W
        out: dict = {}
        for w, c in h.terms.items():
            om, word = W.reduced_word_left(w)
            terms = {W.identity: mpq(1)}
            for i in reversed(word):
                terms = self._lmul_inv_gen(terms, i)
            terms = self._lmul_omega(terms, om)
            for x, v in terms.items():
                _acc(out, x, c * v)
        return HeckeElem(self, out)

    def circMap(self, h):
        return self.circ_map(h)

    # ------------------------------------------------------------------
    # X-side cross relation (double algebra)
    def xpush(self, u: FiniteWeylElem, lam: Vec) -> dict:
        """``T_u X^lam`` as {(nu, y): coeff} meaning ``X^nu T_y``."""
        key = (u, lam)
        hit = self._xpush.get(key)
        if hit is not None:
            return hit
        rs = self.rs
        word = rs.word(u)
        if not word:
            hit = {(lam, u): mpq(1)}
        else:
            j = word[-1]
            rest = rs.from_word(word[:-1])
            s = rs.simple_reflections[j]
            # T_j X^lam = X^{s_j lam} T_j + (k - 1/k) (x^lam - x^{s_j lam})/(1 - x^{alpha_j^vee})
            out: dict = {}
            for (nu, y), c in self.xpush(rest, rs.act(s, lam)).items():
                for z, d in self._fin_rmul_gen({y: mpq(1)}, j + 1).items():
                    _acc(out, (nu, z), c * d)
            dd = divided_difference(lam, lam[j], rs.simple_coroots[j], 1).scale(self.kdiff[j + 1])
            for mu, c in dd.terms.items():
                for key2, d in self.xpush(rest, mu).items():
                    _acc(out, key2, c * d)
            hit = out
        self._xpush[key] = hit
        return hit

    def _fin_rmul_gen(self, terms: dict, i: int) -> dict:
        rs = self.rs
        s = rs.simple_reflections[i - 1]
        kd = self.kdiff[i]
        out: dict = {}
        for w, c in terms.items():
            ws = rs.mul(w, s)
            if rs.length(ws) > rs.length(w):
                _acc(out, ws, c)
            else:
                _acc(out, w, kd * c)
                _acc(out, ws, c)
        return out


def _add_laurent(out: dict, key, f: Laurent, c) -> None:
    cur = out.get(key)
    if cur is None:
        out[key] = f.scale(c)
    else:
        cur.iadd(f, c)


class DoubleElem:
    """Sum of normal ordered terms ``X^lam T_u Y^mu`` keyed by (lam, u, mu)."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: HeckeAlgebra, terms: Mapping | None = None):
        self.alg = alg
        self.terms: dict = {}
        if terms:
            for key, c in terms.items():
                if c != 0:
                    self.terms[key] = mpq(c)

    @classmethod
    def from_bernstein(cls, b: BernsteinElem) -> DoubleElem:
        z = b.alg.rs.zero()
        out = cls(b.alg)
        for u, f in b.terms.items():
            for mu, c in f.terms.items():
                _acc(out.terms, (z, u, mu), c)
        return out

    @classmethod
    def X(cls, alg: HeckeAlgebra, lam: Sequence[int], c=1) -> DoubleElem:
        return cls(alg, {(tuple(lam), alg.rs.identity, alg.rs.zero()): c})

    @classmethod
    def T(cls, alg: HeckeAlgebra, u: FiniteWeylElem, c=1) -> DoubleElem:
        z = alg.rs.zero()
        return cls(alg, {(z, u, z): c})

    @classmethod
    def Y(cls, alg: HeckeAlgebra, mu: Sequence[int], c=1) -> DoubleElem:
        return cls(alg, {(alg.rs.zero(), alg.rs.identity, tuple(mu)): c})

    def __add__(self, other: DoubleElem) -> DoubleElem:
        t = dict(self.terms)
        for k, c in other.terms.items():
            _acc(t, k, c)
        out = DoubleElem(self.alg)
        out.terms = t
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> DoubleElem:
        out = DoubleElem(self.alg)
        out.terms = {k: c * v for k, v in self.terms.items() if c * v != 0}
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, DoubleElem):
            return self.terms == other.terms
        return NotImplemented

    def __repr__(self) -> str:
        return f"DoubleElem({len(self.terms)} terms)"

    def __mul__(self, other):
        if not isinstance(other, DoubleElem):
            return self.scale(rational(other))
        alg = self.alg
        out: dict = {}
        for (a, u, b), c1 in self.terms.items():
            for (cx, v, d), c2 in other.terms.items():
                c = c1 * c2
                if not any(b):
                    # X^a T_u X^cx T_v Y^d
                    for (nu, y), c3 in alg.xpush(u, cx).items():
                        lam = tuple(p + q for p, q in zip(a, nu))
                        for z, c4 in alg.fin_mul(y, v).items():
                            _acc(out, (lam, z, d), c * c3 * c4)
                elif not any(cx):
                    # X^a T_u Y^b T_v Y^d
                    for y, f in alg.push(b, v).items():
                        for mu, c3 in f.terms.items():
                            m2 = tuple(p + q for p, q in zip(mu, d))
                            for z, c4 in alg.fin_mul(u, y).items():
                                _acc(out, (a, z, m2), c * c3 * c4)
                else:
                    raise OutsideSupportedSpan("product needs a Y-X exchange")
        res = DoubleElem(alg)
        res.terms = out
        return res

    def star(self) -> DoubleElem:
        """``(X^lam T_u Y^mu)^* = X^{-mu} T_{u^{-1}} Y^{-lam}``."""
        rs = self.alg.rs
        out: dict = {}
        for (lam, u, mu), c in self.terms.items():
            key = (tuple(-x for x in mu), rs.inverse(u), tuple(-x for x in lam))
            _acc(out, key, c)
        res = DoubleElem(self.alg)
        res.terms = out
        return res


def duality_star(x) -> DoubleElem:
    """The duality anti-involution on the supported span."""
    if isinstance(x, BernsteinElem):
        x = DoubleElem.from_bernstein(x)
    elif isinstance(x, HeckeElem):
        if not x.is_finite():
            x = DoubleElem.from_bernstein(x.alg.to_bernstein(x))
        else:
            out = DoubleElem(x.alg)
            z = x.alg.rs.zero()
            for w, c in x.terms.items():
                _acc(out.terms, (z, w.fin, z), c)
            x = out
    if not isinstance(x, DoubleElem):
        raise OutsideSupportedSpan(f"cannot apply duality to {type(x).__name__}")
    return x.star()


dualityStar = duality_star


def word_product(alg: HeckeAlgebra, factors: Iterable[HeckeElem]) -> HeckeElem:
    out = alg.one()
    for f in factors:
        out = out * f
    return out
