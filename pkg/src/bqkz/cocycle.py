"""Pointwise evaluation of the BqKZ cocycle.

Torus points are tuples ``(t_1, ..., t_N)`` with ``t_i = t^{varpi_i^vee}``.
All routines are generic in the scalar field: with a
:class:`~bqkz.scalars.ParameterField` and rational points everything is
exact; the numeric module supplies an mpmath field with the same
interface.

Conventions
-----------
* ``c(z; k) = (1/k - k z)/(1 - z)`` and ``b(z; k) = (k - 1/k)/(1 - z)``.
* ``R_i(z; gamma) = c(z; k_i)^{-1} (eta(T_i)(gamma) - b(z; k_i))``
  which simplifies to ``((1 - z) eta(T_i) - (k_i - 1/k_i)) / (1/k_i - k_i z)``.
* ``C_{(w,e)}(t, gamma) = R_{i1}(t^{a_{i1}^vee}) R_{i2}(t^{(s_{i1} a_{i2})^vee})
  ... eta(omega)(gamma)`` for ``w = s_{i1} ... s_{ir} omega``.
* ``C_{(e,w)}(t, gamma) = C_iota C_{(w,e)}(gamma^{-1}, t^{-1}) C_iota``.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from math import gcd

from gmpy2 import mpq

from .affweyl import AffElem, AffineRoot
from .linalg import identity, mat_mul, permute, solve
from .prinser import PrincipalSeries
from .scalars import BqkzError
from .torus import Point, Torus


class CocyclePole(BqkzError):
    """An R-matrix factor hit its pole ``z = k^{-2}``."""

    def __init__(self, msg: str, root: AffineRoot | None = None):
        super().__init__(msg)
        self.root = root


class RMatrixPole(CocyclePole):
    pass


class PoleAtOne(BqkzError):
    """``t^{a^vee} = 1`` in a c- or b-function."""


class SingularInverse(BqkzError):
    pass



def c_fun(z, k):
    if z == 1:
        raise PoleAtOne("c(z;k) has a pole at z = 1")
    return (1 / k - k * z) / (1 - z)


def b_fun(z, k):
    if z == 1:
        raise PoleAtOne("b(z;k) has a pole at z = 1")
    return (k - 1 / k) / (1 - z)


def random_rational(rng: random.Random) -> mpq:
    """A coordinate ``+-p/q`` with ``2 <= p, q <= 20`` and ``gcd(p, q) = 1``."""
    while True:
        p, q = rng.randint(2, 20), rng.randint(2, 20)
        if gcd(p, q) == 1:
            return mpq(rng.choice((1, -1)) * p, q)


def random_point(rng: random.Random, rank: int) -> Point:
    return tuple(random_rational(rng) for _ in range(rank))


class Cocycle(Torus):
    """Cocycle values for a fixed principal series and scalar field."""

    def __init__(self, ps: PrincipalSeries, field):
        super().__init__(ps.H.W, field)
        self.ps = ps
        self.H = ps.H
        self.dim = ps.dim
        f = field
        self._eta_const = {}
        for i in range(1, self.W.N + 1):
            self._eta_const[i] = ps.eta_generator(i).evaluate((self.one,) * self.rs.rank, f)
        self._eta0_cache: dict = {}
        self._omega_cache: dict = {}
        self.min_pole_gap = None
        # C_iota: T_v -> T_{v^{-1}}
        rs = self.rs
        self.iota_perm = tuple(ps.index[rs.inverse(v)] for v in ps.basis)

    # ------------------------------------------------------------------
    # c-functions
    def c_affine(self, a: AffineRoot, point: Sequence):
        k = self.field.k[self.W.root_class(a)]
        return c_fun(self.char_affine(point, a), k)

    def b_affine(self, a: AffineRoot, point: Sequence):
        k = self.field.k[self.W.root_class(a)]
        return b_fun(self.char_affine(point, a), k)

    # ------------------------------------------------------------------
    # R-matrices
    def eta_T(self, i: int, gamma: Sequence):
        if i:
            return self._eta_const[i]
        key = tuple(gamma)
        hit = self._eta0_cache.get(key)
        if hit is None:
            if len(self._eta0_cache) > 4096:
                self._eta0_cache.clear()
            hit = self.ps.eta_generator(0).evaluate(gamma, self.field)
            self._eta0_cache[key] = hit
        return hit

    def eta_omega(self, om: AffElem, gamma: Sequence):
        if om == self.W.identity:
            return identity(self.dim, self.one, self.zero)
        key = (om, tuple(gamma))
        hit = self._omega_cache.get(key)
        if hit is None:
            if len(self._omega_cache) > 4096:
                self._omega_cache.clear()
            hit = self.ps.eta_generator(om).evaluate(gamma, self.field)
            self._omega_cache[key] = hit
        return hit

    def r_matrix(self, i: int, z, gamma: Sequence, root: AffineRoot | None = None):
        k = self.kvals[i]
        den = 1 / k - k * z
        self._note_gap(den * k)
        if den == 0:
            raise RMatrixPole(f"R_{i} has a pole at z = k^-2 (affine root {root})", root)
        E = self.eta_T(i, gamma)
        kd = k - 1 / k
        a = (1 - z) / den
        d = kd / den
        n = self.dim
        return [[a * E[r][c] - (d if r == c else 0) for c in range(n)] for r in range(n)]

    def rMatrix(self, i, z, gamma):
        return self.r_matrix(i, z, gamma)

    def _note_gap(self, gap) -> None:
        if not self.field.exact:
            m = abs(gap)
            if self.min_pole_gap is None or m < self.min_pole_gap:
                self.min_pole_gap = m

    # ------------------------------------------------------------------
    # cocycle values
    def cocycle_x(self, w: AffElem, t: Sequence, gamma: Sequence):
        """``C_{(w,e)}(t, gamma)``."""
        W = self.W
        word, om = W.reduced_word(w)
        out = None
        prefix = W.identity
        for i in word:
            a = W.act_root(prefix, W.simple_roots[i])
            z = self.char_affine(t, a)
            R = self.r_matrix(i, z, gamma, a)
            out = R if out is None else mat_mul(out, R)
            prefix = W.mul(prefix, W.simple[i])
        if om != W.identity:
            E = self.eta_omega(om, gamma)
            out = E if out is None else mat_mul(out, E)
        if out is None:
            out = identity(self.dim, self.one, self.zero)
        return out

    def iota_conj(self, m):
        return permute(m, self.iota_perm)

    def cocycle_y(self, w: AffElem, t: Sequence, gamma: Sequence):
        """``C_{(e,w)}(t, gamma) = C_iota C_{(w,e)}(gamma^{-1}, t^{-1}) C_iota``."""
        return self.iota_conj(self.cocycle_x(w, self.inv_point(gamma), self.inv_point(t)))

    def cocycle(self, wx: AffElem, wy: AffElem, t: Sequence, gamma: Sequence):
        """``C_{(wx,wy)}(t, gamma) = C_{(wx,e)}(t,gamma) C_{(e,wy)}(wx^{-1} t, gamma)``."""
        W = self.W
        left = self.cocycle_x(wx, t, gamma)
        if wy == W.identity:
            return left
        t2 = self.act_point(W.inv(wx), t)
        return mat_mul(left, self.cocycle_y(wy, t2, gamma))

    def cocycleC(self, wx, t, gamma, wy=None):
        return self.cocycle(wx, wy or self.W.identity, t, gamma)

    def connection(self, lam: Sequence[int], mu: Sequence[int], t: Sequence, gamma: Sequence):
        """``C_{(lam,mu)}(t, gamma)``."""
        W = self.W
        return self.cocycle(W.translation(lam), W.translation(mu), t, gamma)

    def connection_via_dominant(self, lam: Sequence[int], t: Sequence, gamma: Sequence):
        """``C_{(lam,e)}`` through ``lam = mu - nu`` with mu, nu dominant.

        Uses ``C_{(-nu,e)}(t) = C_{(nu,e)}(q^{nu} t)^{-1}``; an independent
        path used to cross-check :meth:`connection`.
        """
        W = self.W
        mu = tuple(max(c, 0) for c in lam)
        nu = tuple(max(-c, 0) for c in lam)
        left = self.cocycle_x(W.translation(mu), t, gamma)
        t2 = self.shift(t, tuple(-x for x in mu))
        inner = self.cocycle_x(W.translation(nu), self.shift(t2, nu), gamma)
        n = self.dim
        try:
            inv = solve(inner, identity(n, self.one, self.zero))
        except BqkzError as exc:
            raise SingularInverse(str(exc)) from exc
        return mat_mul(left, inv)

    def gauge_factor(self, lam: Sequence[int], mu: Sequence[int], t: Sequence, gamma: Sequence):
        """``delta^{-lam-mu} q^{-<mu, w0 lam>} gamma^{-w0 lam} t^{w0 mu}``."""
        rs = self.rs
        w0 = rs.longest_element
        w0lam = rs.act(w0, lam)
        w0mu = rs.act(w0, mu)
        s = tuple(-a - b for a, b in zip(lam, mu))
        val = self.delta_pow(s) * self.field.qpow(-rs.inner(mu, w0lam))
        val = val * self.char(gamma, tuple(-x for x in w0lam)) * self.char(t, w0mu)
        return val

    def gauged(self, lam: Sequence[int], mu: Sequence[int], t: Sequence, gamma: Sequence):
        """``D_{(lam,mu)}(t, gamma)``."""
        f = self.gauge_factor(lam, mu, t, gamma)
        return [[f * x for x in row] for row in self.connection(lam, mu, t, gamma)]

    def gaugedD(self, lam, mu, t, gamma):
        return self.gauged(lam, mu, t, gamma)

    # ------------------------------------------------------------------
    # asymptotic constants and singular set
    def asymptotic_constants(self) -> tuple[list, list]:
        """``(A_i^{(0,0)}, B_i^{(0,0)})`` in the ``T_v`` basis."""
        rs = self.rs
        ps = self.ps
        H = self.H
        w0 = rs.longest_element
        n = self.dim
        # columns of the change of basis: T_{w0} T_w in terms of T_v
        P = [[mpq(0)] * n for _ in range(n)]
        for j, w in enumerate(ps.basis):
            for v, c in H.fin_mul(w0, w).items():
                P[ps.index[v]][j] = c
        Pinv = solve(P, identity(n))
        As, Bs = [], []
        for i in range(rs.rank):
            wi = rs.fundamental_coweight(i)
            w0wi = rs.act(w0, wi)
            da = [[mpq(int(r == c and rs.act(rs.inverse(w), w0wi) == w0wi)) for c, w in enumerate(ps.basis)]
                  for r in range(n)]
            db = [[mpq(int(r == c and rs.act(w, wi) == wi)) for c, w in enumerate(ps.basis)]
                  for r in range(n)]
            As.append(mat_mul(mat_mul(P, da), Pinv))
            Bs.append(mat_mul(mat_mul(P, db), Pinv))
        return As, Bs

    def asymptoticConstants(self):
        return self.asymptotic_constants()

    def in_singular_set(self, t: Sequence, positive_side: bool = True):
        """Witness ``(root, n)`` if ``t^{alpha^vee} k_alpha^2 = q_alpha^{-n}``
        (n >= 1) for some positive root, else None.

        With ``positive_side=False`` the test is for ``t^{-1}``.
        """
        rs = self.rs
        f = self.field
        if not positive_side:
            t = self.inv_point(t)
        for idx, beta in enumerate(rs.positive_roots):
            val = self.char(t, rs.coroots[idx]) * f.k[rs.root_class(beta)] ** 2
            qa = f.q_alpha(rs.root_length_sq(beta))
            if val <= 1:
                continue
            # candidate n from magnitudes, then exact check around it
            n = 1
            cur = 1 / qa
            while cur < val:
                cur = cur / qa
                n += 1
            if cur == val:
                return (beta, n)
        return None

    def inSingularSet(self, t, positive_side=True) -> bool:
        return self.in_singular_set(t, positive_side) is not None
