"""The extended affine Weyl group ``W = W0 x| P^vee``.

An element ``w = t(lam) v`` is an :class:`AffElem` holding the translation
``lam`` (coweight coordinates) and the finite part ``v``.  Affine roots
``alpha + r c`` are pairs ``(root_index, r)`` into ``RootSystem.roots``.

Simple affine roots are ``a_0 = -phi + c`` and ``a_i = alpha_i``; the
simple reflection ``s_0`` equals ``t(phi^vee) s_phi``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

from .rootdata import FiniteWeylElem, RootSystem, Vec
from .scalars import LONG, BqkzError


class NotInOmega(BqkzError):
    """A length-zero residue did not match any element of Omega."""


@dataclass(frozen=True)
class AffElem:
    """``t(lam) v`` in normal form."""

    lam: Vec
    fin: FiniteWeylElem

    def __repr__(self) -> str:
        return f"AffElem(t{self.lam}, {self.fin.mat})"


AffineRoot = tuple  # (root index, level)


class AffineWeylGroup:
    """Arithmetic in W for a fixed root system."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.N = rs.rank
        self._len: dict = {}
        self._rword: dict = {}
        self._lword: dict = {}
        self._bruhat: dict = {}
        phi = rs.highest_root
        self.phi_index = rs.root_index[phi]
        self.neg_phi_index = rs.root_index[tuple(-x for x in phi)]
        self.s_phi = rs.reflection(phi)
        self.phi_vee = rs.coroot(phi)

    # ------------------------------------------------------------------
    # elements
    @cached_property
    def identity(self) -> AffElem:
        return AffElem(self.rs.zero(), self.rs.identity)

    def translation(self, lam: Sequence[int]) -> AffElem:
        return AffElem(tuple(lam), self.rs.identity)

    def finite(self, v: FiniteWeylElem) -> AffElem:
        return AffElem(self.rs.zero(), v)

    @cached_property
    def simple(self) -> tuple[AffElem, ...]:
        """``(s_0, s_1, ..., s_N)``."""
        s0 = AffElem(self.phi_vee, self.s_phi)
        return (s0,) + tuple(self.finite(s) for s in self.rs.simple_reflections)

    def mul(self, a: AffElem, b: AffElem) -> AffElem:
        rs = self.rs
        lam = tuple(x + y for x, y in zip(a.lam, rs.act(a.fin, b.lam)))
        return AffElem(lam, rs.mul(a.fin, b.fin))

    def prod(self, elems: Iterable[AffElem]) -> AffElem:
        out = self.identity
        for x in elems:
            out = self.mul(out, x)
        return out

    def inv(self, a: AffElem) -> AffElem:
        rs = self.rs
        vinv = rs.inverse(a.fin)
        return AffElem(tuple(-x for x in rs.act(vinv, a.lam)), vinv)

    def from_word(self, word: Iterable[int], omega: AffElem | None = None, omega_left=True) -> AffElem:
        w = self.prod(self.simple[i] for i in word)
        if omega is None:
            return w
        return self.mul(omega, w) if omega_left else self.mul(w, omega)

    # ------------------------------------------------------------------
    # affine roots
    def act_root(self, w: AffElem, a: AffineRoot) -> AffineRoot:
        """``t(lam) v (alpha + r c) = v alpha + (r - <lam, v alpha>) c``."""
        rs = self.rs
        idx, r = a
        j = rs.act_root_index(w.fin, idx)
        return (j, r - rs.pairing(w.lam, rs.roots[j]))

    def is_positive_root(self, a: AffineRoot) -> bool:
        idx, r = a
        return r >= (1 if idx >= self.rs.npos else 0)

    @cached_property
    def simple_roots(self) -> tuple[AffineRoot, ...]:
        return ((self.neg_phi_index, 1),) + tuple((i, 0) for i in range(self.N))

    def simple_index(self, a: AffineRoot) -> int | None:
        try:
            return self.simple_roots.index(a)
        except ValueError:
            return None

    def root_class(self, a: AffineRoot) -> str:
        return self.rs.root_class(self.rs.roots[a[0]])

    def simple_class(self, i: int) -> str:
        return LONG if i == 0 else self.rs.root_class(self.rs.simple_roots[i - 1])

    def affine_coroot(self, a: AffineRoot) -> tuple[Vec, object]:
        """``a^vee = alpha^vee + (2r/|alpha|^2) c`` as (coweight coords, level)."""
        idx, r = a
        beta = self.rs.roots[idx]
        return self.rs.coroots[idx], 2 * r / self.rs.root_length_sq(beta)

    # ------------------------------------------------------------------
    # length and inversion sets
    def length(self, w: AffElem) -> int:
        hit = self._len.get(w)
        if hit is None:
            rs = self.rs
            perm = rs.root_perm(w.fin)
            npos = rs.npos
            hit = 0
            for idx in range(len(rs.roots)):
                j = perm[idx]
                val = (j >= npos) + rs.pairing(w.lam, rs.roots[j]) - (idx >= npos)
                if val > 0:
                    hit += val
            self._len[w] = hit
        return hit

    def inversion_set(self, w: AffElem) -> set[AffineRoot]:
        """``S(w) = S_+ cap w^{-1} S_-``."""
        rs = self.rs
        out = set()
        perm = rs.root_perm(w.fin)
        npos = rs.npos
        for idx in range(len(rs.roots)):
            j = perm[idx]
            lo = int(idx >= npos)
            hi = int(j >= npos) + rs.pairing(w.lam, rs.roots[j])
            for r in range(lo, hi):
                out.add((idx, r))
        return out

    def left_descent(self, w: AffElem, i: int) -> bool:
        """``l(s_i w) < l(w)``."""
        return not self.is_positive_root(self.act_root(self.inv(w), self.simple_roots[i]))

    def right_descent(self, w: AffElem, i: int) -> bool:
        """``l(w s_i) < l(w)``."""
        return not self.is_positive_root(self.act_root(w, self.simple_roots[i]))

    # ------------------------------------------------------------------
    # reduced words
    def reduced_word(self, w: AffElem) -> tuple[tuple[int, ...], AffElem]:
        """``(word, omega)`` with ``w = s_{i1} ... s_{il} omega``.

        Left descents are stripped with the smallest index first.
        """
        hit = self._rword.get(w)
        if hit is None:
            word = []
            cur = w
            while self.length(cur) > 0:
                i = next(j for j in range(self.N + 1) if self.left_descent(cur, j))
                word.append(i)
                cur = self.mul(self.simple[i], cur)
            self._check_omega(cur)
            hit = (tuple(word), cur)
            self._rword[w] = hit
        return hit

    def reduced_word_left(self, w: AffElem) -> tuple[AffElem, tuple[int, ...]]:
        """``(omega, word)`` with ``w = omega s_{i1} ... s_{il}``."""
        hit = self._lword.get(w)
        if hit is None:
            word, omega = self.reduced_word(w)
            perm = self.omega_permutation(omega)
            # s_i omega = omega s_{omega^{-1}(i)}
            inv = {v: k for k, v in enumerate(perm)}
            hit = (omega, tuple(inv[i] for i in word))
            self._lword[w] = hit
        return hit

    def _check_omega(self, w: AffElem) -> None:
        if w not in self.omega_table:
            raise NotInOmega(f"length-zero element {w} not in Omega")

    # ------------------------------------------------------------------
    # Omega
    @cached_property
    def minuscule(self) -> tuple[int, ...]:
        """Indices j (0-based) with ``<varpi_j^vee, phi> = 1``."""
        return tuple(j for j in range(self.N) if self.rs.highest_root[j] == 1)

    @cached_property
    def omega_elements(self) -> tuple[AffElem, ...]:
        """``e`` followed by ``u_j = t(varpi_j) v_j^{-1}`` for minuscule j."""
        rs = self.rs
        out = [self.identity]
        w0 = rs.longest_element
        for j in self.minuscule:
            wj = rs.fundamental_coweight(j)
            _, vj = rs.dominant_rep(rs.act(w0, wj))
            out.append(AffElem(wj, rs.inverse(vj)))
        return tuple(out)

    @cached_property
    def omega_table(self) -> dict:
        return {w: n for n, w in enumerate(self.omega_elements)}

    def omegaGroup(self) -> list[AffElem]:
        return list(self.omega_elements)

    def omega_v(self, j: int) -> FiniteWeylElem:
        """``v_j`` for minuscule j: shortest v with ``v(varpi_j) = w0(varpi_j)``."""
        rs = self.rs
        return rs.dominant_rep(rs.act(rs.longest_element, rs.fundamental_coweight(j)))[1]

    def omega_permutation(self, omega: AffElem) -> tuple[int, ...]:
        """Permutation p of {0..N} with ``omega(a_i) = a_{p(i)}``."""
        key = ("perm", omega)
        hit = self._rword.get(key)
        if hit is None:
            out = []
            for a in self.simple_roots:
                b = self.act_root(omega, a)
                j = self.simple_index(b)
                if j is None:
                    raise NotInOmega(f"{omega} does not permute simple roots")
                out.append(j)
            hit = tuple(out)
            self._rword[key] = hit
        return hit

    def omega_part(self, w: AffElem) -> AffElem:
        """The Omega factor of ``w = omega u`` with u in W_{Q^vee}."""
        return self.reduced_word_left(w)[0]

    # ------------------------------------------------------------------
    # conjugacy classes of simple reflections
    def reflection_classes(self) -> list[set[int]]:
        """Conjugacy classes of {s_0..s_N}: odd braid bonds plus Omega orbits."""
        n = self.N + 1
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        rs = self.rs
        grads = [tuple(-x for x in rs.highest_root)] + list(rs.simple_roots)
        for i in range(n):
            for j in range(i + 1, n):
                cij = rs.pairing(rs.coroot(grads[j]), grads[i])
                cji = rs.pairing(rs.coroot(grads[i]), grads[j])
                if cij * cji == 1:  # m_ij = 3
                    union(i, j)
        for om in self.omega_elements:
            for i, j in enumerate(self.omega_permutation(om)):
                union(i, j)
        classes: dict[int, set[int]] = {}
        for i in range(n):
            classes.setdefault(find(i), set()).add(i)
        return sorted(classes.values(), key=min)

    # ------------------------------------------------------------------
    # Bruhat order
    def bruhat_leq(self, w: AffElem, w2: AffElem) -> bool:
        om, _ = self.reduced_word_left(w)
        om2, _ = self.reduced_word_left(w2)
        if om != om2:
            return False
        oi = self.inv(om)
        return self._coxeter_leq(self.mul(oi, w), self.mul(oi, w2))

    def _coxeter_leq(self, u: AffElem, v: AffElem) -> bool:
        key = (u, v)
        hit = self._bruhat.get(key)
        if hit is not None:
            return hit
        lu, lv = self.length(u), self.length(v)
        if lu > lv:
            res = False
        elif lv == lu:
            res = u == v
        elif lu == 0:
            res = True
        else:
            i = next(j for j in range(self.N + 1) if self.left_descent(v, j))
            sv = self.mul(self.simple[i], v)
            if self.left_descent(u, i):
                res = self._coxeter_leq(self.mul(self.simple[i], u), sv)
            else:
                res = self._coxeter_leq(u, sv)
        self._bruhat[key] = res
        return res

    def finite_bruhat_leq(self, u: FiniteWeylElem, v: FiniteWeylElem) -> bool:
        return self.bruhat_leq(self.finite(u), self.finite(v))

    # ------------------------------------------------------------------
    # helpers
    def translation_word(self, lam: Sequence[int]) -> tuple[tuple[int, ...], AffElem]:
        return self.reduced_word(self.translation(lam))

    def extended_order_geq(self, lam, mu) -> bool:
        """``lam >= mu`` in the order used for the Y-triangularity."""
        return self.rs.extended_order_geq(lam, mu, self.finite_bruhat_leq)

    def elements_up_to_length(self, n: int) -> list[AffElem]:
        """All elements of length <= n (ordered by length, then word)."""
        level = list(self.omega_elements)
        seen = set(level)
        out = list(level)
        for _ in range(n):
            nxt = []
            for w in level:
                for s in self.simple:
                    u = self.mul(w, s)
                    if u not in seen and self.length(u) == self.length(w) + 1:
                        seen.add(u)
                        nxt.append(u)
            out += nxt
            level = nxt
        return out
