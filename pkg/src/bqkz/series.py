"""Truncated bigraded matrix power series around ``(u, v) = (0, 0)``.

A term ``t^{-alpha} gamma^{beta}`` is keyed by the pair ``(alpha, beta)``
of coweight-coordinate tuples; its grade is ``h(alpha) + h(beta)`` where
``h`` sums simple-coroot coordinates.  In the final series alpha and beta
lie in ``Q_+^vee``, i.e. they are polynomials in ``u_r = t^{-alpha_r^vee}``
and ``v_s = gamma^{alpha_s^vee}``.

The gauged connection matrices are expanded factor by factor along the
reduced word of ``t(varpi_i^vee)``: every R-matrix argument is a
u-monomial of positive grade, so ``c^{-1}`` and ``b`` expand as geometric
series, while the gamma dependence (from ``eta(T_0)`` and ``eta(omega)``)
is a finite Laurent polynomial carried exactly.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from gmpy2 import mpq

from .cocycle import Cocycle
from .linalg import identity, mat_add, mat_mul, solve
from .rootdata import RootSystem, Vec
from .scalars import BqkzError


class NonUnitConstantTerm(BqkzError):
    pass


class NonnegativityViolation(BqkzError):
    """A final exponent left ``Q_+^vee``."""


class LaurentFloorExceeded(BqkzError):
    pass


Key = tuple  # (alpha, beta)


class Grading:
    """Cached heights for one root system."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self._h: dict = {}
        self._cc: dict = {}

    def height(self, lam: Vec):
        h = self._h.get(lam)
        if h is None:
            h = self.rs.height(lam)
            self._h[lam] = h
        return h

    def coroot_coords(self, lam: Vec):
        c = self._cc.get(lam)
        if c is None:
            c = self.rs.coroot_coords(lam)
            self._cc[lam] = c
        return c

    def in_q_plus(self, lam: Vec) -> bool:
        return all(x.denominator == 1 and x >= 0 for x in self.coroot_coords(lam))

    def grade(self, key: Key):
        return self.height(key[0]) + self.height(key[1])


def _add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def _is_zero(m) -> bool:
    return all(x == 0 for row in m for x in row)


class MatrixSeries:
    """``sum coeffs[(alpha, beta)] t^{-alpha} gamma^{beta}`` truncated at grade D."""

    def __init__(self, grading: Grading, dim: int, degree, coeffs: dict | None = None, mode: str = "total"):
        self.grading = grading
        self.rs = grading.rs
        self.dim = dim
        self.degree = degree
        self.mode = mode
        self.coeffs: dict = {}
        for k, m in (coeffs or {}).items():
            self._acc(k, m)
        self.coeffs = {k: m for k, m in self.coeffs.items() if not _is_zero(m)}

    def _grade(self, key: Key):
        g = self.grading
        if self.mode == "total":
            return g.grade(key)
        if self.mode == "u":
            return g.height(key[0])
        return g.height(key[1])

    def _acc(self, key: Key, m, scale=1) -> None:
        if self._grade(key) > self.degree:
            return
        cur = self.coeffs.get(key)
        if cur is None:
            self.coeffs[key] = [[scale * x for x in row] for row in m] if scale != 1 else [list(r) for r in m]
        else:
            self.coeffs[key] = mat_add(cur, m, scale)

    def _clean(self) -> MatrixSeries:
        self.coeffs = {k: m for k, m in self.coeffs.items() if not _is_zero(m)}
        return self

    def _like(self, coeffs=None, degree=None, mode=None) -> MatrixSeries:
        return MatrixSeries(self.grading, self.dim, self.degree if degree is None else degree,
                            coeffs, self.mode if mode is None else mode)

    @classmethod
    def identity(cls, grading: Grading, dim: int, degree, mode="total") -> MatrixSeries:
        z = grading.rs.zero()
        return cls(grading, dim, degree, {(z, z): identity(dim)}, mode)

    def __add__(self, other: MatrixSeries) -> MatrixSeries:
        out = self._like(self.coeffs)
        for k, m in other.coeffs.items():
            out._acc(k, m)
        return out._clean()

    def __sub__(self, other: MatrixSeries) -> MatrixSeries:
        out = self._like(self.coeffs)
        for k, m in other.coeffs.items():
            out._acc(k, m, -1)
        return out._clean()

    def __mul__(self, other: MatrixSeries) -> MatrixSeries:
        out = self._like()
        gr = self._grade
        for k1, m1 in self.coeffs.items():
            g1 = gr(k1)
            for k2, m2 in other.coeffs.items():
                # heights are linear, so the grade of the product is additive
                if g1 + gr(k2) > self.degree:
                    continue
                key = (_add(k1[0], k2[0]), _add(k1[1], k2[1]))
                out._acc(key, mat_mul(m1, m2))
        return out._clean()

    def scale(self, c) -> MatrixSeries:
        return self._like({k: [[c * x for x in row] for row in m] for k, m in self.coeffs.items()})

    def scalar_monomial_mul(self, c, alpha: Vec, beta: Vec) -> MatrixSeries:
        """Multiply by ``c t^{-alpha} gamma^{beta}``."""
        out = self._like()
        for (a, b), m in self.coeffs.items():
            out._acc((_add(a, alpha), _add(b, beta)), [[c * x for x in row] for row in m])
        return out._clean()

    def scalarMonomialMultiply(self, c, alpha, beta):
        return self.scalar_monomial_mul(c, alpha, beta)

    def truncate(self, degree, mode: str = "total") -> MatrixSeries:
        out = MatrixSeries(self.grading, self.dim, degree, None, mode)
        for k, m in self.coeffs.items():
            out._acc(k, m)
        return out

    def constant_term(self):
        z = self.rs.zero()
        return self.coeffs.get((z, z), [[mpq(0)] * self.dim for _ in range(self.dim)])

    def invert_unit(self) -> MatrixSeries:
        """Inverse of a series with invertible grade-0 part (Neumann series)."""
        z = self.rs.zero()
        c0 = self.coeffs.get((z, z))
        if c0 is None:
            raise NonUnitConstantTerm("zero constant term")
        try:
            c0inv = solve(c0, identity(self.dim))
        except BqkzError as exc:
            raise NonUnitConstantTerm(str(exc)) from exc
        rest = self._like({k: m for k, m in self.coeffs.items() if k != (z, z)})
        if any(self._grade(k) <= 0 for k in rest.coeffs):
            raise NonUnitConstantTerm("non-constant terms of grade <= 0")
        nmat = self._like({k: [[-x for x in row] for row in mat_mul(c0inv, m)] for k, m in rest.coeffs.items()})
        inv0 = self._like({(z, z): c0inv})
        total = inv0
        power = self._like({(z, z): identity(self.dim)})
        while True:
            power = nmat * power
            if not power.coeffs:
                break
            total = total + power * inv0
        return total

    def invertUnit(self):
        return self.invert_unit()

    def iota_conj(self, perm: Sequence[int]) -> MatrixSeries:
        n = self.dim
        return self._like({k: [[m[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
                           for k, m in self.coeffs.items()})

    def swap(self) -> MatrixSeries:
        """``(alpha, beta) -> (beta, alpha)``."""
        return self._like({(b, a): m for (a, b), m in self.coeffs.items()})

    def check_nonnegative(self) -> None:
        g = self.grading
        for a, b in self.coeffs:
            if not (g.in_q_plus(a) and g.in_q_plus(b)):
                raise NonnegativityViolation(f"exponent pair {(a, b)} outside Q+^vee")

    def is_nonnegative(self) -> bool:
        try:
            self.check_nonnegative()
            return True
        except NonnegativityViolation:
            return False

    def evaluate(self, t: Sequence, gamma: Sequence, field=None):
        """Sum the truncated series at a point (exact or numeric)."""
        n = self.dim
        zero = 0 if field is None else field.coerce(0)
        out = [[zero] * n for _ in range(n)]
        for (a, b), m in self.coeffs.items():
            val = 1 if field is None else field.coerce(1)
            for c, x in zip(a, t):
                if c:
                    val = val * x ** (-c)
            for c, x in zip(b, gamma):
                if c:
                    val = val * x**c
            for i in range(n):
                row = m[i]
                oi = out[i]
                for j in range(n):
                    if row[j] != 0:
                        coef = row[j] if field is None else field.coerce(row[j])
                        oi[j] = oi[j] + coef * val
        return out

    def grades(self) -> dict:
        out: dict = {}
        for k in self.coeffs:
            out.setdefault(self.grading.grade(k), []).append(k)
        return out

    def __len__(self) -> int:
        return len(self.coeffs)

    def to_json(self) -> list[dict]:
        from .scalars import format_rational

        return [
            {"alpha": list(a), "beta": list(b), "matrix": [[format_rational(x) for x in row] for row in m]}
            for (a, b), m in sorted(self.coeffs.items())
        ]


# ----------------------------------------------------------------------
# expansions
class SeriesExpander:
    """Expansions of the gauged matrices ``A_i`` and ``B_j`` for one cocycle."""

    def __init__(self, co: Cocycle):
        if not co.field.exact:
            raise ValueError("series expansion needs the exact parameter field")
        self.co = co
        self.rs = co.rs
        self.W = co.W
        self.ps = co.ps
        self.dim = co.dim
        self.grading = Grading(co.rs)
        self.k = co.kvals
        self._cache: dict = {}
        self.min_window = 0

    def _eta_terms(self, key) -> dict:
        """``{mu: matrix}`` with ``eta(g)(gamma) = sum_mu M_mu gamma^mu``."""
        gm = self.ps.eta_generator(key)
        out: dict = {}
        n = self.dim
        for r in range(n):
            for c in range(n):
                for mu, val in gm.rows[r][c].terms.items():
                    m = out.setdefault(mu, [[mpq(0)] * n for _ in range(n)])
                    m[r][c] = val
        return out

    def expand_r_factor(self, i: int, coeff, mono: Vec, degree, side: str = "x") -> MatrixSeries:
        """Series of ``R_i(z; gamma)`` with ``z = coeff * t^{-mono}`` (side "x")
        or, for side "y", of ``C_iota R_i(z; t^{-1}) C_iota`` with
        ``z = coeff * gamma^{mono}``.
        """
        g = self.grading
        h = g.height(mono)
        if h <= 0:
            raise ValueError("R-factor monomial must have positive grade")
        k = self.k[i]
        z0 = self.rs.zero()
        n = self.dim
        nmax = int(degree // h)
        mode = "u" if side == "x" else "v"
        if i == 0:
            eta_terms = self._eta_terms(0)
        else:
            eta_terms = {z0: self.co._eta_const[i]}
        out = MatrixSeries(g, n, degree, None, mode)
        I = identity(n)
        for m in range(nmax + 1):
            fn = k * (k ** (2 * m) - (k ** (2 * m - 2) if m else 0)) * coeff**m
            gn = -(k * k - 1) * k ** (2 * m) * coeff**m
            zexp = tuple(m * x for x in mono)
            for mu, E in eta_terms.items():
                key = (zexp, mu) if side == "x" else (mu, zexp)
                out._acc(key, E, fn)
            out._acc((zexp, z0) if side == "x" else (z0, zexp), I, gn)
        out._clean()
        if side == "y":
            out = out.iota_conj(self.co.iota_perm)
        return out

    def expandRFactor(self, i, coeff, mono, degree):
        return self.expand_r_factor(i, coeff, mono, degree)

    def _omega_series(self, om, degree, side) -> MatrixSeries | None:
        if om == self.W.identity:
            return None
        terms = self._eta_terms(om)
        mode = "u" if side == "x" else "v"
        z0 = self.rs.zero()
        out = MatrixSeries(self.grading, self.dim, degree, None, mode)
        for mu, E in terms.items():
            out._acc((z0, mu) if side == "x" else (mu, z0), E)
        out._clean()
        if side == "y":
            out = out.iota_conj(self.co.iota_perm)
        return out

    def expand_translation(self, lam: Sequence[int], degree, side: str = "x") -> MatrixSeries:
        """``C_{(lam,e)}(t, gamma)`` (side "x") or ``C_{(e,lam)}(t, gamma)``
        (side "y") for dominant lam, truncated in the u (resp. v) grade."""
        W = self.W
        rs = self.rs
        f = self.co.field
        word, om = W.reduced_word(W.translation(lam))
        mode = "u" if side == "x" else "v"
        self.min_window = 0  # checked against the floor of this expansion in _finish
        acc = MatrixSeries.identity(self.grading, self.dim, degree, mode)
        prefix = W.identity
        for i in word:
            idx, r = W.act_root(prefix, W.simple_roots[i])
            beta = rs.roots[idx]
            if rs.is_positive(beta) or r < 1:
                raise ValueError("translation word produced a non-contracting R-factor")
            # z = q_beta^r t^{beta^vee} = coeff * t^{-|beta|^vee}
            cor, level = W.affine_coroot((idx, r))
            coeff = f.qpow(level)
            mono = tuple(-x for x in cor)
            acc = acc * self.expand_r_factor(i, coeff, mono, degree, side)
            self._track_window(acc, side)
            prefix = W.mul(prefix, W.simple[i])
        tail = self._omega_series(om, degree, side)
        if tail is not None:
            acc = acc * tail
        return acc

    def _track_window(self, s: MatrixSeries, side: str) -> None:
        g = self.grading
        for a, b in s.coeffs:
            lam = b if side == "x" else a
            m = min((x for x in g.coroot_coords(lam)), default=0)
            self.min_window = min(self.min_window, m)

    def laurent_floor(self, degree) -> object:
        rs = self.rs
        w0 = rs.longest_element
        worst = max(self.grading.height(tuple(-x for x in rs.act(w0, rs.fundamental_coweight(i))))
                    for i in range(rs.rank))
        # the eta(T_0) factors spread exponents over the whole W0-orbit, so the
        # window reaches twice the gauge shift below zero even at degree 0
        return -2 * worst - degree

    def expand_gauged_a(self, i: int, degree) -> MatrixSeries:
        """``A_i = delta^{-varpi_i} gamma^{-w0 varpi_i} C_{(varpi_i, e)}``, i 0-based."""
        key = ("A", i, degree)
        hit = self._cache.get(key)
        if hit is None:
            rs = self.rs
            wi = rs.fundamental_coweight(i)
            base = self.expand_translation(wi, degree, "x")
            pref = 1 / self.co.delta_pow(wi)
            shift = tuple(-x for x in rs.act(rs.longest_element, wi))
            res = base.scalar_monomial_mul(pref, rs.zero(), shift)
            hit = self._finish(res, degree)
            self._cache[key] = hit
        return hit

    def expandGaugedA(self, i, degree):
        return self.expand_gauged_a(i, degree)

    def expand_gauged_b(self, j: int, degree) -> MatrixSeries:
        """``B_j`` from the A-expansion: ``coeff_B(a, b) = C_iota coeff_A(b, a) C_iota``."""
        key = ("B", j, degree)
        hit = self._cache.get(key)
        if hit is None:
            a = self.expand_gauged_a(j, degree)
            hit = a.swap().iota_conj(self.co.iota_perm)
            hit.check_nonnegative()
            self._cache[key] = hit
        return hit

    def expandGaugedB(self, j, degree):
        return self.expand_gauged_b(j, degree)

    def expand_gauged_b_direct(self, j: int, degree) -> MatrixSeries:
        """``B_j = delta^{-varpi_j} t^{w0 varpi_j} C_{(e, varpi_j)}`` expanded
        on the spectral side, without going through ``A_j``."""
        rs = self.rs
        wj = rs.fundamental_coweight(j)
        base = self.expand_translation(wj, degree, "y")
        pref = 1 / self.co.delta_pow(wj)
        # t^{w0 varpi} = t^{-alpha} with alpha = -w0 varpi
        shift = tuple(-x for x in rs.act(rs.longest_element, wj))
        res = base.scalar_monomial_mul(pref, shift, rs.zero())
        return self._finish(res, degree)

    def _finish(self, res: MatrixSeries, degree) -> MatrixSeries:
        floor = self.laurent_floor(degree)
        if self.min_window < floor:
            raise LaurentFloorExceeded(f"intermediate exponent {self.min_window} below floor {floor}")
        res.check_nonnegative()
        return res.truncate(degree, "total")

    def gauged_series(self, which: str, i: int, degree) -> MatrixSeries:
        return self.expand_gauged_a(i, degree) if which == "A" else self.expand_gauged_b(i, degree)


def geometric_tail_bound(series_norms: Iterable[float], ratio: float) -> float:
    """Crude tail estimate ``last * ratio / (1 - ratio)`` from per-grade norms."""
    norms = list(series_norms)
    if not norms or ratio >= 1:
        return float("inf")
    return norms[-1] * ratio / (1 - ratio)
