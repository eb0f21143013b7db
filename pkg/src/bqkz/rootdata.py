"""Finite irreducible reduced root systems and their Weyl groups.

Conventions
-----------
* Long roots have squared length 2.
* The Cartan matrix is ``a[i][j] = <alpha_i, alpha_j^vee>``.
* Roots are integer vectors in the simple-root basis.
* Elements of the coweight lattice P^vee are integer vectors of pairings
  ``c_i = <lam, alpha_i>`` (coordinates in the fundamental coweight basis).
* Elements of W0 are stored as integer matrices acting on coweight
  coordinates; reduced words are derived on demand.
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cache, cached_property
from math import lcm

from gmpy2 import mpq

from .scalars import BqkzError, length_class

Vec = tuple  # tuple[int, ...]
Mat = tuple  # tuple[tuple[int, ...], ...]


class NotDominant(BqkzError):
    """A dominant weight was required."""


class UnsupportedType(BqkzError):
    """Unknown Cartan type or rank."""


# Dynkin data: squared lengths of the simple roots and the bonds
# (i, j, multiplicity), 0-based, Bourbaki numbering.
def _dynkin(type_label: str, rank: int):
    n = rank
    chain = [(i, i + 1, 1) for i in range(n - 1)]
    if type_label == "A" and n >= 1:
        return [2] * n, chain
    if type_label == "B" and n >= 2:
        return [2] * (n - 1) + [1], chain[:-1] + [(n - 2, n - 1, 2)]
    if type_label == "C" and n >= 2:
        return [1] * (n - 1) + [2], chain[:-1] + [(n - 2, n - 1, 2)]
    if type_label == "D" and n >= 4:
        return [2] * n, chain[:-1] + [(n - 3, n - 1, 1)]
    if type_label == "E" and n in (6, 7, 8):
        bonds = [(0, 2, 1), (1, 3, 1), (2, 3, 1)] + [(i, i + 1, 1) for i in range(3, n - 1)]
        return [2] * n, bonds
    if type_label == "F" and n == 4:
        return [2, 2, 1, 1], [(0, 1, 1), (1, 2, 2), (2, 3, 1)]
    if type_label == "G" and n == 2:
        return [mpq(2, 3), 2], [(0, 1, 3)]
    raise UnsupportedType(f"unsupported root system {type_label}{rank}")


def _mat_mul(a: Mat, b: Mat) -> Mat:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def _mat_vec(a: Mat, v: Sequence) -> Vec:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def _rational_inverse(m: Sequence[Sequence]) -> list[list[mpq]]:
    n = len(m)
    a = [[mpq(x) for x in row] + [mpq(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


@dataclass(frozen=True)
class FiniteWeylElem:
    """An element of W0, stored as its action on coweight coordinates."""

    mat: Mat

    def __repr__(self) -> str:
        return f"FiniteWeylElem({self.mat})"


class RootSystem:
    """Root system of type ``type_label`` and rank ``rank``.

    >>> R = RootSystem("A", 2)
    >>> len(R.positive_roots)
    3
    """

    def __init__(self, type_label: str, rank: int):
        type_label = type_label.upper()
        self.type_label = type_label
        self.rank = rank
        lengths, bonds = _dynkin(type_label, rank)
        self.length_sq: tuple[mpq, ...] = tuple(mpq(x) for x in lengths)
        n = rank
        gram = [[mpq(0)] * n for _ in range(n)]
        for i in range(n):
            gram[i][i] = self.length_sq[i]
        for i, j, m in bonds:
            val = -m * min(self.length_sq[i], self.length_sq[j]) / 2
            gram[i][j] = gram[j][i] = val
        self.gram: tuple[tuple[mpq, ...], ...] = tuple(tuple(r) for r in gram)
        self.cartan: Mat = tuple(
            tuple(int(2 * gram[i][j] / gram[j][j]) for j in range(n)) for i in range(n)
        )
        self.gram_inv = tuple(tuple(r) for r in _rational_inverse(gram))
        self.e = lcm(*[int(x.denominator) for row in self.gram_inv for x in row])
        self._build_roots()

    # ------------------------------------------------------------------
    # roots
    def _build_roots(self) -> None:
        n = self.rank
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        seen = set(simple)
        queue = deque(simple)
        while queue:
            beta = queue.popleft()
            for i in range(n):
                img = self.reflect_root(i, beta)
                if img not in seen:
                    seen.add(img)
                    queue.append(img)
        pos = sorted((r for r in seen if all(x >= 0 for x in r)), key=lambda r: (sum(r), tuple(-x for x in r)))
        self.positive_roots: tuple[Vec, ...] = tuple(pos)
        self.roots: tuple[Vec, ...] = tuple(pos) + tuple(tuple(-x for x in r) for r in pos)
        self.root_index = {r: idx for idx, r in enumerate(self.roots)}
        self.npos = len(pos)
        self.highest_root: Vec = pos[-1]
        self.simple_roots = tuple(simple)
        self.coroots: tuple[Vec, ...] = tuple(self.coroot(r) for r in self.roots)
        self.coroot_index = {c: idx for idx, c in enumerate(self.coroots)}

    def reflect_root(self, i: int, beta: Sequence[int]) -> Vec:
        """``s_i(beta)`` for a vector in the simple-root basis."""
        pair = sum(beta[j] * self.cartan[j][i] for j in range(self.rank))
        return tuple(b - pair * (j == i) for j, b in enumerate(beta))

    def root_length_sq(self, beta: Sequence[int]) -> mpq:
        g = self.gram
        n = self.rank
        return sum(beta[i] * g[i][j] * beta[j] for i in range(n) for j in range(n))

    def is_positive(self, beta: Sequence[int]) -> bool:
        return any(x > 0 for x in beta)

    def coroot(self, beta: Sequence[int]) -> Vec:
        """Coweight coordinates of beta^vee."""
        lsq = self.root_length_sq(beta)
        out = []
        for j in range(self.rank):
            v = 2 * sum(self.gram[j][i] * beta[i] for i in range(self.rank)) / lsq
            assert v.denominator == 1
            out.append(int(v))
        return tuple(out)

    def root_class(self, beta: Sequence[int]) -> str:
        return length_class(self.root_length_sq(beta))

    @cached_property
    def simple_coroots(self) -> tuple[Vec, ...]:
        return tuple(self.coroot(a) for a in self.simple_roots)

    # ------------------------------------------------------------------
    # coweights
    def pairing(self, lam: Sequence[int], beta: Sequence[int]):
        """``<lam, beta>`` for lam in coweight and beta in root coordinates."""
        return sum(x * y for x, y in zip(lam, beta))

    def inner(self, lam: Sequence, mu: Sequence) -> mpq:
        """``<lam, mu>`` for two vectors in coweight coordinates."""
        gi = self.gram_inv
        n = self.rank
        return sum(lam[i] * gi[i][j] * mu[j] for i in range(n) for j in range(n) if lam[i] and mu[j])

    def fundamental_coweight(self, i: int) -> Vec:
        return tuple(int(i == j) for j in range(self.rank))

    @cached_property
    def rho_hat(self) -> Vec:
        """``sum_i varpi_i^vee``."""
        return (1,) * self.rank

    def zero(self) -> Vec:
        return (0,) * self.rank

    def coroot_coords(self, lam: Sequence) -> tuple[mpq, ...]:
        """Coordinates of lam in the simple-coroot basis (rational)."""
        inv = self._coroot_basis_inverse
        return tuple(sum(inv[i][j] * lam[j] for j in range(self.rank)) for i in range(self.rank))

    @cached_property
    def _coroot_basis_inverse(self):
        m = [[self.simple_coroots[i][j] for i in range(self.rank)] for j in range(self.rank)]
        return _rational_inverse(m)

    def in_coroot_lattice(self, lam: Sequence) -> bool:
        return all(x.denominator == 1 for x in self.coroot_coords(lam))

    def height(self, lam: Sequence) -> mpq:
        """``h(lam) = sum`` of simple-coroot coordinates."""
        return sum(self.coroot_coords(lam))

    def is_dominant(self, lam: Sequence) -> bool:
        return all(x >= 0 for x in lam)

    def dominance_leq(self, lam: Sequence, mu: Sequence) -> bool:
        """``lam <= mu`` in dominance order, i.e. ``mu - lam`` in Q+^vee."""
        if not (self.is_dominant(lam) and self.is_dominant(mu)):
            raise NotDominant("dominance order compares dominant coweights")
        diff = self.coroot_coords(tuple(b - a for a, b in zip(lam, mu)))
        return all(x.denominator == 1 and x >= 0 for x in diff)

    # ------------------------------------------------------------------
    # Weyl group
    @cached_property
    def identity(self) -> FiniteWeylElem:
        n = self.rank
        return FiniteWeylElem(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def reflection(self, beta: Sequence[int]) -> FiniteWeylElem:
        """``s_beta`` acting on coweight coordinates."""
        cor = self.coroot(beta)
        n = self.rank
        return FiniteWeylElem(
            tuple(tuple(int(i == j) - cor[i] * beta[j] for j in range(n)) for i in range(n))
        )

    @cached_property
    def simple_reflections(self) -> tuple[FiniteWeylElem, ...]:
        return tuple(self.reflection(a) for a in self.simple_roots)

    def mul(self, v: FiniteWeylElem, u: FiniteWeylElem) -> FiniteWeylElem:
        cache = _cache(self, "_mul_cache")
        key = (v.mat, u.mat)
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = FiniteWeylElem(_mat_mul(v.mat, u.mat))
        return hit

    def act(self, w: FiniteWeylElem, lam: Sequence) -> Vec:
        return _mat_vec(w.mat, lam)

    def reflect(self, w: FiniteWeylElem, lam: Sequence) -> Vec:
        return self.act(w, lam)

    def from_word(self, word: Iterable[int]) -> FiniteWeylElem:
        w = self.identity
        for i in word:
            w = self.mul(w, self.simple_reflections[i])
        return w

    def root_perm(self, w: FiniteWeylElem) -> tuple[int, ...]:
        """Permutation of root indices induced by w."""
        return _root_perm(self, w.mat)

    def act_root(self, w: FiniteWeylElem, beta: Sequence[int]) -> Vec:
        return self.roots[self.root_perm(w)[self.root_index[tuple(beta)]]]

    def act_root_index(self, w: FiniteWeylElem, idx: int) -> int:
        return self.root_perm(w)[idx]

    def length(self, w: FiniteWeylElem) -> int:
        perm = self.root_perm(w)
        return sum(1 for j in range(self.npos) if perm[j] >= self.npos)

    def inverse(self, w: FiniteWeylElem) -> FiniteWeylElem:
        cache = _cache(self, "_inv_cache")
        hit = cache.get(w.mat)
        if hit is None:
            hit = cache[w.mat] = self.from_word(reversed(self.word(w)))
        return hit

    def word(self, w: FiniteWeylElem) -> tuple[int, ...]:
        """Reduced word ``w = s_{i1} ... s_{il}`` (smallest left descent first)."""
        return _word(self, w.mat)

    def left_descent(self, w: FiniteWeylElem, i: int) -> bool:
        """``l(s_i w) < l(w)``, i.e. ``w^{-1}(alpha_i) < 0``."""
        winv = self.inverse(w)
        return self.act_root_index(winv, i) >= self.npos

    def right_descent(self, w: FiniteWeylElem, i: int) -> bool:
        """``l(w s_i) < l(w)``, i.e. ``w(alpha_i) < 0``."""
        return self.act_root_index(w, i) >= self.npos

    @cached_property
    def longest_element(self) -> FiniteWeylElem:
        return self.dominant_rep(tuple(-x for x in self.rho_hat))[1]

    def longestElement(self) -> FiniteWeylElem:
        return self.longest_element

    def dominant_rep(self, lam: Sequence) -> tuple[Vec, FiniteWeylElem]:
        """``(lam_+, vbar)`` with vbar the shortest w such that ``w(lam_+) = lam``."""
        lam = tuple(lam)
        word = []
        while True:
            i = next((j for j, c in enumerate(lam) if c < 0), None)
            if i is None:
                break
            lam = self.act(self.simple_reflections[i], lam)
            word.append(i)
        return lam, self.from_word(word)

    def weyl_group(self) -> list[FiniteWeylElem]:
        """All of W0 sorted by (length, reduced word).  Small groups only."""
        return list(_elements(self))

    @cached_property
    def order(self) -> int:
        return len(self.weyl_group())

    def orbit(self, lam: Sequence) -> list[Vec]:
        seen = {tuple(lam)}
        queue = deque(seen)
        while queue:
            mu = queue.popleft()
            for s in self.simple_reflections:
                nu = self.act(s, mu)
                if nu not in seen:
                    seen.add(nu)
                    queue.append(nu)
        return sorted(seen)

    def saturated_set(self, lam: Sequence) -> set[Vec]:
        """Smallest saturated subset of P^vee containing lam."""
        result = {tuple(lam)}
        queue = deque(result)
        while queue:
            mu = queue.popleft()
            for beta, cor in zip(self.roots, self.coroots):
                n = self.pairing(mu, beta)
                for r in range(1, n + 1):
                    nu = tuple(m - r * c for m, c in zip(mu, cor))
                    if nu not in result:
                        result.add(nu)
                        queue.append(nu)
        return result

    def extended_order_geq(self, lam: Sequence, mu: Sequence, bruhat_leq) -> bool:
        """``lam >= mu`` in the order refining dominance by Bruhat order on vbar.

        ``bruhat_leq(u, v)`` is the Bruhat comparison on W0 elements.
        """
        lp, vl = self.dominant_rep(lam)
        mp, vm = self.dominant_rep(mu)
        if lp != mp:
            return self.dominance_leq(mp, lp)
        return bruhat_leq(vm, vl)

    def __repr__(self) -> str:
        return f"RootSystem({self.type_label!r}, {self.rank})"


@cache
def get_root_system(type_label: str, rank: int) -> RootSystem:
    return RootSystem(type_label, rank)


def _cache(rs: RootSystem, name: str) -> dict:
    d = rs.__dict__.get(name)
    if d is None:
        d = rs.__dict__[name] = {}
    return d


def _root_perm(rs: RootSystem, mat: Mat) -> tuple[int, ...]:
    cache = _cache(rs, "_perm_cache")
    hit = cache.get(mat)
    if hit is None:
        # w(beta)^vee = w(beta^vee); coroots are in coweight coordinates.
        hit = tuple(rs.coroot_index[_mat_vec(mat, c)] for c in rs.coroots)
        cache[mat] = hit
    return hit


def _word(rs: RootSystem, mat: Mat) -> tuple[int, ...]:
    cache = _cache(rs, "_word_cache")
    key = mat
    hit = cache.get(key)
    if hit is not None:
        return hit
    w = FiniteWeylElem(mat)
    word = []
    # Right descents peeled off the end: w = w' s_i with l(w') = l(w) - 1.
    while True:
        perm = rs.root_perm(w)
        i = next((j for j in range(rs.rank) if perm[j] >= rs.npos), None)
        if i is None:
            break
        word.append(i)
        w = rs.mul(w, rs.simple_reflections[i])
    hit = tuple(reversed(word))
    cache[key] = hit
    return hit


def _elements(rs: RootSystem) -> tuple[FiniteWeylElem, ...]:
    cache = _cache(rs, "_word_cache")
    key = "elements"
    hit = cache.get(key)
    if hit is None:
        seen = {rs.identity.mat: rs.identity}
        queue = deque([rs.identity])
        while queue:
            w = queue.popleft()
            for s in rs.simple_reflections:
                u = rs.mul(s, w)
                if u.mat not in seen:
                    seen[u.mat] = u
                    queue.append(u)
                    if len(seen) > 200000:
                        raise UnsupportedType("Weyl group too large to enumerate")
        hit = tuple(sorted(seen.values(), key=lambda w: (rs.length(w), rs.word(w))))
        cache[key] = hit
    return hit


def all_types(max_rank: int = 8) -> list[tuple[str, int]]:
    """Supported (type, rank) pairs up to the given rank."""
    out = []
    for n in range(1, max_rank + 1):
        out.append(("A", n))
        if n >= 2:
            out += [("B", n), ("C", n)]
        if n >= 4:
            out.append(("D", n))
    out += [("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]
    return [t for t in out if t[1] <= max_rank]


def iter_small_weights(rank: int, bound: int) -> Iterable[Vec]:
    """All coweight-coordinate vectors with entries in [-bound, bound]."""
    return itertools.product(range(-bound, bound + 1), repeat=rank)
