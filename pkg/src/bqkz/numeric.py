"""Floating point evaluation: theta functions, the gauge, Phi and U.

All numbers live in a private mpmath context whose precision is set by
:class:`NumericContext` (53 bits by default, i.e. hardware double
accuracy).  :class:`NumericField` mirrors the interface of the exact
:class:`~bqkz.scalars.ParameterField`, so the cocycle, torus and
operator code run unchanged on floating points.

Every identity check reports a residual together with the a-priori
bound it was compared against.
"""

from __future__ import annotations

import itertools
import math
import random
import warnings
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from gmpy2 import mpq
from mpmath.ctx_mp import MPContext

from .cocycle import Cocycle, CocyclePole
from .linalg import determinant, mat_vec, solve
from .macdonald import MacdonaldEngine
from .report import record
from .rootdata import RootSystem
from .scalars import BqkzError, ParameterField, length_class, rational
from .solver import PsiSolution, PsiSolver
from .torus import Torus


class NearPole(UserWarning):
    """A factor of the continuation came within the pole threshold."""


class GaugeSingular(BqkzError):
    """A theta function in the denominator of the gauge (nearly) vanished."""


class IllConditioned(BqkzError):
    pass


# ----------------------------------------------------------------------
# numeric parameter field
class NumericField:
    """``(q, k)`` as mpmath numbers with the ParameterField interface."""

    exact = False

    def __init__(self, qbase, e: int, k: dict, dps: int = 15):
        self.ctx = MPContext()
        self.ctx.dps = dps
        self.dps = dps
        self.e = e
        self.qbase_exact = rational(qbase)
        self.qbase = self.coerce(self.qbase_exact)
        self.k = {c: self.coerce(v) for c, v in k.items()}
        self.eps = self.ctx.eps

    @classmethod
    def from_exact(cls, field: ParameterField, dps: int = 15) -> NumericField:
        return cls(field.qbase, field.e, dict(field.k), dps)

    @property
    def q(self):
        return self.qbase**self.e

    def coerce(self, x):
        if isinstance(x, type(mpq(0))):
            return self.ctx.mpf(int(x.numerator)) / int(x.denominator)
        return self.ctx.convert(x)

    def qpow(self, r):
        n = rational(r) * self.e if not isinstance(r, float) else r * self.e
        if isinstance(n, type(mpq(0))) and n.denominator == 1:
            return self.qbase ** int(n)
        return self.qbase ** self.coerce(n)

    def q_alpha(self, length_sq):
        return self.qpow(2 / rational(length_sq))

    def k_class(self, cls: str):
        return self.k[cls]

    def k_length(self, length_sq):
        return self.k[length_class(length_sq)]

    def is_zero(self, x) -> bool:
        return abs(x) <= self.eps

    def magnitude(self, x) -> float:
        return float(abs(x))

    def inverted(self) -> NumericField:
        return NumericField(self.qbase_exact, self.e, {c: 1 / v for c, v in self.k.items()}, self.dps)


@dataclass
class NumericContext:
    """Precision, theta truncation and tolerances for numeric checks.

    ``theta_cutoff`` bounds ``<lam - x, lam - x>`` in the centered theta sum
    (None: derived from the precision).  ``tail_tolerance`` is the target
    relative truncation error of the Psi series (None: ``10^{-(dps - 3)}``).
    """

    dps: int = 15
    theta_cutoff: float | None = None
    tail_tolerance: float | None = None
    seed: int = 0
    pole_threshold: float = 1e-8

    def tolerance(self) -> float:
        return self.tail_tolerance if self.tail_tolerance is not None else 10.0 ** (-(self.dps - 3))


# ----------------------------------------------------------------------
# theta functions
@dataclass
class ThetaValue:
    value: object
    tail: object
    abs_sum: object
    terms: int


class Theta:
    """``theta_q(t) = sum_{lam in P^vee} q^{<lam,lam>/2} t^lam``.

    The sum is centered at the real point ``x`` maximizing the term
    magnitude, so ``|term(lam)| = A q^{d(lam)/2}`` with
    ``d(lam) = <lam - x, lam - x>``; terms with ``d <= cutoff`` are kept and
    the rest is bounded by a box count of the Gaussian tail.
    """

    def __init__(self, rs: RootSystem, field: NumericField, cutoff: float | None = None):
        self.rs = rs
        self.field = field
        n = rs.rank
        om = [rs.fundamental_coweight(i) for i in range(n)]
        self.gram = [[float(rs.inner(om[i], om[j])) for j in range(n)] for i in range(n)]
        self.gram_exact = [[rational(rs.inner(om[i], om[j])) for j in range(n)] for i in range(n)]
        inv = solve([[mpq(x) for x in row] for row in self.gram_exact], [[mpq(int(i == j)) for j in range(n)]
                                                                        for i in range(n)])
        self.gram_inv = [[float(x) for x in row] for row in inv]
        self.logq = -math.log(float(field.q)) if field.q < 1 else 1.0
        if cutoff is None:
            # q^{cutoff/2} below the working precision with a margin
            cutoff = 2 * (field.dps + 6) * math.log(10) / self.logq
        self.cutoff = float(cutoff)
        self._offsets: dict = {}

    def _center(self, t: Sequence) -> list[float]:
        # maximize  -logq/2 * <n,n> + sum n_i log|t_i|  ->  G n = log|t| / logq
        lg = [float(self.field.ctx.log(abs(x))) for x in t]
        return [sum(self.gram_inv[i][j] * lg[j] for j in range(len(lg))) / self.logq for i in range(len(lg))]

    def _quad(self, v: Sequence[float]) -> float:
        n = len(v)
        return sum(v[i] * self.gram[i][j] * v[j] for i in range(n) for j in range(n))

    def _tail_bound(self, amp: float) -> float:
        """Upper bound for ``sum_{d > cutoff} A q^{d/2}`` (box count per shell)."""
        n = self.rs.rank
        gmax = max(self.gram_inv[i][i] for i in range(n))
        total = 0.0
        j = 0
        while True:
            r = self.cutoff + j
            count = (2 * math.sqrt((r + 1) * gmax) + 2) ** n
            term = count * math.exp(-self.logq * r / 2)
            total += term
            if term < 1e-30 * max(total, 1e-300) or j > 10000:
                break
            j += 1
        return amp * total

    def evaluate(self, t: Sequence) -> ThetaValue:
        f = self.field
        ctx = f.ctx
        n = self.rs.rank
        x = self._center(t)
        half = [math.sqrt(self.cutoff * self.gram_inv[i][i]) for i in range(n)]
        ranges = [range(math.floor(x[i] - half[i]), math.ceil(x[i] + half[i]) + 1) for i in range(n)]
        val = ctx.mpf(0)
        asum = ctx.mpf(0)
        count = 0
        for lam in itertools.product(*ranges):
            d = self._quad([lam[i] - x[i] for i in range(n)])
            if d > self.cutoff:
                continue
            ex = sum(lam[i] * self.gram_exact[i][j] * lam[j] for i in range(n) for j in range(n)) / 2
            term = f.qpow(ex)
            for c, xi in zip(lam, t):
                if c:
                    term = term * xi**c
            val += term
            asum += abs(term)
            count += 1
        # amplitude A = max continuous term = q^{-<x,x>/2} prod |t_i|^{x_i}
        logamp = self.logq * self._quad(x) / 2
        tail = ctx.exp(logamp) * self._tail_bound(1.0)
        return ThetaValue(val, tail, asum, count)

    def __call__(self, t: Sequence):
        return self.evaluate(t).value

    def error_bound(self, tv: ThetaValue) -> float:
        """Truncation tail plus accumulated rounding."""
        return tv.tail + 10 * tv.terms * self.field.eps * tv.abs_sum


def jacobi_theta(z, q, ctx: MPContext | None = None):
    """``vartheta_q(z) = prod_{m >= 0} (1 - q^m z)(1 - q^{m+1}/z)``."""
    ctx = ctx or MPContext()
    return ctx.qp(z, q) * ctx.qp(q / z, q)


# ----------------------------------------------------------------------
# the gauge
class Gauge:
    """``G(t, gamma)`` and ``G~(t, gamma)`` built from :class:`Theta`."""

    def __init__(self, torus: Torus, theta: Theta, singular_threshold: float = 1e-10):
        self.torus = torus
        self.theta = theta
        self.rs = torus.rs
        self.delta = torus.delta_k()
        self.delta_inv = tuple(1 / x for x in self.delta)
        self.w0 = self.rs.longest_element
        self.singular_threshold = singular_threshold

    def w0_gamma_inv(self, gamma: Sequence):
        return self.torus.inv_point(self.torus.weyl_act(self.w0, gamma))

    @staticmethod
    def _mul(a, b):
        return tuple(x * y for x, y in zip(a, b))

    def _den(self, tv: ThetaValue, name: str):
        if abs(tv.value) <= self.singular_threshold * max(tv.abs_sum, 1e-300):
            raise GaugeSingular(f"theta factor {name} vanishes at this point")

    def parts(self, t: Sequence, gamma: Sequence) -> tuple:
        s = self.w0_gamma_inv(gamma)
        num = self.theta.evaluate(self._mul(t, s))
        d1 = self.theta.evaluate(self._mul(self.delta, t))
        d2 = self.theta.evaluate(self._mul(self.delta_inv, s))
        return num, d1, d2

    def _rel(self, tvs) -> float:
        return sum(float(self.theta.error_bound(tv) / abs(tv.value)) for tv in tvs)

    def G_with_bound(self, t: Sequence, gamma: Sequence) -> tuple:
        """``(G, relative error bound)``."""
        num, d1, d2 = self.parts(t, gamma)
        self._den(d1, "theta(delta t)")
        self._den(d2, "theta(delta^-1 w0(gamma)^-1)")
        return num.value / (d1.value * d2.value), self._rel((num, d1, d2))

    def G(self, t: Sequence, gamma: Sequence):
        return self.G_with_bound(t, gamma)[0]

    def G_tilde_with_bound(self, t: Sequence, gamma: Sequence) -> tuple:
        num, d1, _ = self.parts(t, gamma)
        self._den(d1, "theta(delta t)")
        return num.value / d1.value, self._rel((num, d1))

    def G_tilde(self, t: Sequence, gamma: Sequence):
        return self.G_tilde_with_bound(t, gamma)[0]

    # camelCase aliases
    gaugeG = G
    gaugeGTilde = G_tilde


# ----------------------------------------------------------------------
# Psi, Phi and U
@dataclass
class PsiValue:
    vector: list
    tail: float
    shift: tuple
    min_pole_gap: float | None


class PsiEvaluator:
    """Meromorphic continuation of a truncated ``Psi`` by D-shifts.

    ``Psi(t, gamma) = D_{(lam,mu)}(t, gamma) Psi(q^{-lam} t, q^{mu} gamma)``
    with ``lam = n rho^vee`` and ``mu = m rho^vee`` (``rho^vee`` the sum of
    the fundamental coweights) chosen minimal so that all ``|u_r|, |v_s|``
    at the shifted point lie below the depth threshold.
    """

    def __init__(self, solver: PsiSolver, sol: PsiSolution, ctx: NumericContext | None = None):
        self.ctx = ctx or NumericContext()
        self.solver = solver
        self.sol = sol
        self.rs = solver.rs
        self.field = NumericField.from_exact(solver.field, self.ctx.dps)
        self.co = Cocycle(solver.ps, self.field)
        self.W = self.co.W
        self.theta = Theta(self.rs, self.field, self.ctx.theta_cutoff)
        self.gauge = Gauge(self.co, self.theta)
        f = self.field
        self._terms = [(a, b, [f.coerce(x) for x in v]) for (a, b), v in sol.K.items()]
        rs = self.rs
        self.cor = [rs.simple_coroots[r] for r in range(rs.rank)]
        self.rho = tuple(1 for _ in range(rs.rank))
        self._rho_pair = [float(rs.inner(self.rho, c)) for c in self.cor]
        self.growth = self._growth_rate()
        self.threshold = self._depth_threshold(self.ctx.tolerance())
        self._chi = [self._k_of(w) for w in sol.basis]

    # -- tail model -----------------------------------------------------
    def _growth_rate(self) -> float:
        """``max_g N_g^{1/g}`` with N_g the largest coefficient of grade g."""
        norms = self.solver.tail_norms(self.sol)
        rates = [n ** (1.0 / g) for g, n in enumerate(norms) if g > 0 and n > 0]
        return max(rates + [1.0])

    def tail_estimate(self, depth: float, degree: int | None = None) -> float:
        """Grade > D tail of the series at monomial size ``depth`` (relative)."""
        D = self.sol.degree if degree is None else degree
        nvar = 2 * self.rs.rank
        r = self.growth * depth
        if r >= 1:
            return math.inf
        total = 0.0
        g = D + 1
        while True:
            term = comb(g + nvar - 1, nvar - 1) * r**g
            total += term
            if term < 1e-40 or g > D + 2000:
                break
            g += 1
        return total

    def _depth_threshold(self, tol: float) -> float:
        lo, hi = 0.0, 1.0 / self.growth
        for _ in range(60):
            mid = (lo + hi) / 2
            if self.tail_estimate(mid) <= tol:
                lo = mid
            else:
                hi = mid
        return lo

    # -- coordinates ------------------------------------------------------
    def uv(self, t: Sequence, gamma: Sequence) -> tuple[list, list]:
        """``u_r = t^{-alpha_r^vee}`` and ``v_s = gamma^{alpha_s^vee}``."""
        co = self.co
        u = [co.char(t, tuple(-x for x in c)) for c in self.cor]
        v = [co.char(gamma, c) for c in self.cor]
        return u, v

    def depth(self, t: Sequence, gamma: Sequence) -> float:
        u, v = self.uv(t, gamma)
        return max(float(abs(x)) for x in u + v)

    def choose_shift(self, t: Sequence, gamma: Sequence) -> tuple:
        """Smallest ``(n rho^vee, m rho^vee)`` reaching the depth threshold."""
        u, v = self.uv(t, gamma)
        q = float(self.field.q)
        thr = self.threshold

        def steps(vals):
            n = 0
            for x, p in zip(vals, self._rho_pair):
                ax = float(abs(x))
                if ax > thr:
                    n = max(n, math.ceil(math.log(thr / ax) / (p * math.log(q))))
            return n

        n, m = steps(u), steps(v)
        return tuple(n * x for x in self.rho), tuple(m * x for x in self.rho)

    # -- evaluation ---------------------------------------------------------
    def direct(self, t: Sequence, gamma: Sequence) -> list:
        """Truncated series sum at the point (no continuation)."""
        f = self.field
        co = self.co
        dim = self.solver.dim
        out = [f.coerce(0)] * dim
        for a, b, vec in self._terms:
            m = co.char(t, tuple(-x for x in a)) * co.char(gamma, b)
            out = [o + m * y for o, y in zip(out, vec)]
        return out

    def evaluate(self, t: Sequence, gamma: Sequence, shift: tuple | None = None) -> PsiValue:
        co = self.co
        lam, mu = shift if shift is not None else self.choose_shift(t, gamma)
        t2 = co.shift(t, tuple(-x for x in lam))
        g2 = co.shift(gamma, mu)
        vec = self.direct(t2, g2)
        tail = self.tail_estimate(self.depth(t2, g2))
        gap = None
        if any(lam) or any(mu):
            co.min_pole_gap = None
            try:
                D = co.gauged(lam, mu, t, gamma)
            except CocyclePole as exc:
                raise GaugeSingular(str(exc)) from exc
            gap = co.min_pole_gap
            if gap is not None and gap < self.ctx.pole_threshold:
                warnings.warn(NearPole(f"R-matrix factor within {float(gap):.3e} of its pole"), stacklevel=2)
            vec = mat_vec(D, vec)
        return PsiValue(vec, tail, (lam, mu), None if gap is None else float(gap))

    def psi(self, t: Sequence, gamma: Sequence, shift: tuple | None = None) -> list:
        return self.evaluate(t, gamma, shift).vector

    evalPsi = psi

    def phi(self, t: Sequence, gamma: Sequence) -> list:
        g = self.gauge.G(t, gamma)
        return [g * x for x in self.psi(t, gamma)]

    def _k_of(self, w) -> mpq:
        rs = self.rs
        out = mpq(1)
        perm = rs.root_perm(w)
        for j, beta in enumerate(rs.positive_roots):
            if perm[j] >= rs.npos:
                out *= self.solver.field.k[rs.root_class(beta)]
        return out

    def chi_plus(self, vec: Sequence):
        acc = self.field.coerce(0)
        for c, x in zip(self._chi, vec):
            acc = acc + self.field.coerce(c) * x
        return acc

    def psi_plus(self, t: Sequence, gamma: Sequence):
        return self.chi_plus(self.psi(t, gamma))

    def phi_plus(self, t: Sequence, gamma: Sequence):
        """``Phi^+ = G chi_+(Psi)``."""
        return self.gauge.G(t, gamma) * self.psi_plus(t, gamma)

    evalPhiPlus = phi_plus

    def phi_plus_w(self, w, t: Sequence, gamma: Sequence):
        """``Phi^+_w(t, gamma) = Phi^+(t, w^{-1} gamma)``."""
        g2 = self.co.weyl_act(self.rs.inverse(w), gamma)
        return self.phi_plus(t, g2)

    evalPhiPlusW = phi_plus_w

    # -- fundamental solution ------------------------------------------------
    def tau_column(self, w, t: Sequence, gamma: Sequence) -> list:
        """``(tau(e,w) Phi)(t, gamma) = C_{(e,w)}(t, gamma) Phi(t, w^{-1} gamma)``."""
        co = self.co
        W = self.W
        g2 = co.weyl_act(self.rs.inverse(w), gamma)
        vec = self.phi(t, g2)
        C = co.cocycle(W.identity, W.finite(w), t, gamma)
        return mat_vec(C, vec)

    def domain_basis(self) -> list:
        """Columns ``k(w)^{-1} T_{w0} T_{w^{-1}}`` in the ``T_v`` basis."""
        ps = self.solver.ps
        rs = self.rs
        H = ps.H
        w0 = rs.longest_element
        n = self.solver.dim
        cols = []
        for w in ps.basis:
            v = [mpq(0)] * n
            for u, c in H.fin_mul(w0, rs.inverse(w)).items():
                v[ps.index[u]] = c / self._k_of(w)
            cols.append(v)
        return cols

    def fundamental_u(self, t: Sequence, gamma: Sequence) -> list:
        """``U`` as a matrix in the ``T_v`` basis."""
        ps = self.solver.ps
        n = self.solver.dim
        f = self.field
        cols = [self.tau_column(w, t, gamma) for w in ps.basis]
        Cm = [[cols[j][i] for j in range(n)] for i in range(n)]
        B = self.domain_basis()
        Bm = [[f.coerce(B[j][i]) for j in range(n)] for i in range(n)]
        # U B = C  ->  U = C B^{-1}; solve B^T U^T = C^T
        BT = [[Bm[j][i] for j in range(n)] for i in range(n)]
        CT = [[Cm[j][i] for j in range(n)] for i in range(n)]
        UT = solve(BT, CT)
        return [[UT[j][i] for j in range(n)] for i in range(n)]

    fundamentalU = fundamental_u


# ----------------------------------------------------------------------
# sampling
def deep_point(ev: PsiEvaluator, rng: random.Random, depth: float) -> tuple:
    """``(t, gamma)`` with ``|u_r|, |v_s|`` in ``[depth/10, depth]``.

    Built from log coordinates: ``log t = -C^{-1} log u`` and
    ``log gamma = C^{-1} log v`` with C the simple coroots in coweight
    coordinates.
    """
    f = ev.field
    ctx = f.ctx
    n = ev.rs.rank
    C = [[mpq(x) for x in ev.cor[r]] for r in range(n)]
    Cinv = solve(C, [[mpq(int(i == j)) for j in range(n)] for i in range(n)])
    lu = [math.log(depth) - rng.uniform(0, math.log(10)) for _ in range(n)]
    lv = [math.log(depth) - rng.uniform(0, math.log(10)) for _ in range(n)]
    # u_r = t^{-alpha_r^vee} = prod_i t_i^{-C[r][i]}
    lt = [-sum(float(Cinv[i][r]) * lu[r] for r in range(n)) for i in range(n)]
    lg = [sum(float(Cinv[i][r]) * lv[r] for r in range(n)) for i in range(n)]
    return tuple(ctx.exp(x) for x in lt), tuple(ctx.exp(x) for x in lg)


def deep_rational_point(ev: PsiEvaluator, rng: random.Random, depth: float) -> tuple:
    """Exact rational ``(t, gamma)`` near a :func:`deep_point`.

    Each coordinate is ``q^n r`` with ``r`` a rational of denominator at
    most 1000, so operator coefficients can be evaluated exactly there.
    """
    t, g = deep_point(ev, rng, depth)
    q = ev.solver.field.q
    lq = math.log(float(q))

    def snap(x):
        lx = float(ev.field.ctx.log(x))
        n = math.floor(lx / lq)
        r = Fraction(math.exp(lx - n * lq)).limit_denominator(1000)
        return q**n * mpq(r.numerator, r.denominator)

    return tuple(snap(x) for x in t), tuple(snap(x) for x in g)


def moderate_point(field: NumericField, rng: random.Random, rank: int, span: float = 1.0) -> tuple:
    """A positive point with ``|log t_i| <= span``."""
    ctx = field.ctx
    return tuple(ctx.exp(rng.uniform(-span, span)) for _ in range(rank))


# ----------------------------------------------------------------------
# verification suites
def verify_theta(rs: RootSystem, field: NumericField, samples: int = 20, seed: int = 0,
                 cutoff: float | None = None) -> list[dict]:
    """Symmetry, functional equation and W0-invariance of theta."""
    rng = random.Random(seed)
    th = Theta(rs, field, cutoff)
    tor = Torus(_affine(rs), field)
    out = []
    inv_res, inv_bnd = [], []
    fe_res, fe_bnd = [], []
    w_res, w_bnd = [], []
    W0 = rs.weyl_group()
    for _ in range(samples):
        t = moderate_point(field, rng, rs.rank)
        a = th.evaluate(t)
        b = th.evaluate(tor.inv_point(t))
        inv_res.append(float(abs(a.value - b.value)))
        inv_bnd.append(th.error_bound(a) + th.error_bound(b))
        mu = tuple(rng.randint(-2, 2) for _ in range(rs.rank))
        lhs = th.evaluate(tor.shift(t, mu))
        fac = field.qpow(-rational(rs.inner(mu, mu)) / 2) * tor.char(t, tuple(-x for x in mu))
        fe_res.append(float(abs(lhs.value - fac * a.value)))
        fe_bnd.append(th.error_bound(lhs) + float(abs(fac)) * th.error_bound(a))
        w = rng.choice(W0)
        c = th.evaluate(tor.weyl_act(w, t))
        w_res.append(float(abs(c.value - a.value)))
        w_bnd.append(th.error_bound(c) + th.error_bound(a))
    for name, res, bnd in (("theta(1/t) = theta(t)", inv_res, inv_bnd),
                           ("theta(q^mu t) = q^(-<mu,mu>/2) t^(-mu) theta(t)", fe_res, fe_bnd),
                           ("theta(w t) = theta(t)", w_res, w_bnd)):
        ok = all(r <= b for r, b in zip(res, bnd))
        out.append(record("numeric.theta", name, res, max(bnd), seed, ok))
    return out


def verify_jacobi_theta(field: NumericField, samples: int = 20, seed: int = 0) -> dict:
    """``vartheta_q(q^m z) = (-z)^{-m} q^{-m(m-1)/2} vartheta_q(z)``."""
    rng = random.Random(seed)
    ctx = field.ctx
    q = field.q
    res = []
    for _ in range(samples):
        z = ctx.mpf(rng.uniform(0.2, 5.0)) * rng.choice((1, -1))
        m = rng.randint(-3, 3)
        lhs = jacobi_theta(q**m * z, q, ctx)
        rhs = (-z) ** (-m) * q ** (-(m * (m - 1)) / ctx.mpf(2)) * jacobi_theta(z, q, ctx)
        res.append(float(abs(lhs - rhs) / max(abs(rhs), ctx.eps)))
    bound = 1e3 * float(field.eps)
    return record("numeric.theta", "jacobi functional equation", res, bound, seed)


def verify_gauge(ev: PsiEvaluator, samples: int = 20, seed: int = 0) -> list[dict]:
    """iota-invariance, the q-difference law and the G~/G ratio."""
    rng = random.Random(seed)
    rs = ev.rs
    f = ev.field
    co = ev.co
    gauge = ev.gauge
    w0 = rs.longest_element
    iota_r, iota_b, qd_r, qd_b, rt_r, rt_b = [], [], [], [], [], []
    for _ in range(samples):
        t = moderate_point(f, rng, rs.rank)
        g = moderate_point(f, rng, rs.rank)
        G, eg = gauge.G_with_bound(t, g)
        Gi, ei = gauge.G_with_bound(co.inv_point(g), co.inv_point(t))
        iota_r.append(float(abs(Gi - G) / abs(G)))
        iota_b.append(eg + ei)
        lam = tuple(rng.randint(-1, 1) for _ in range(rs.rank))
        mu = tuple(rng.randint(-1, 1) for _ in range(rs.rank))
        Gs, es = gauge.G_with_bound(co.shift(t, tuple(-x for x in lam)), co.shift(g, mu))
        w0l = rs.act(w0, lam)
        w0m = rs.act(w0, mu)
        fac = co.delta_pow(tuple(-a - b for a, b in zip(lam, mu)))
        fac = fac * f.qpow(-rs.inner(w0l, mu)) * co.char(t, w0m) * co.char(g, tuple(-x for x in w0l))
        rhs = fac * G
        qd_r.append(float(abs(Gs - rhs) / abs(rhs)))
        qd_b.append(es + eg)
        Gt, et = gauge.G_tilde_with_bound(t, g)
        extra = ev.theta.evaluate(gauge._mul(gauge.delta_inv, gauge.w0_gamma_inv(g)))
        ratio = Gt / G
        rt_r.append(float(abs(ratio - extra.value) / abs(extra.value)))
        rt_b.append(et + eg + float(ev.theta.error_bound(extra) / abs(extra.value)))
    out = []
    for name, res, bnd in (("G(1/gamma, 1/t) = G(t, gamma)", iota_r, iota_b),
                           ("G q-difference law", qd_r, qd_b),
                           ("G~/G = theta(delta^-1 w0(gamma)^-1)", rt_r, rt_b)):
        ok = all(r <= b for r, b in zip(res, bnd))
        out.append(record("numeric.gauge", name, res, max(bnd), seed, ok))
    return out


def verify_psi_continuation(ev: PsiEvaluator, samples: int = 10, seed: int = 0) -> list[dict]:
    """Shift-path independence and iota-duality of the continued Psi."""
    rng = random.Random(seed)
    co = ev.co
    sh_r, du_r = [], []
    bound = 0.0
    for _ in range(samples):
        t, g = deep_point(ev, rng, 10 * ev.threshold)
        a = ev.evaluate(t, g)
        lam, mu = a.shift
        lam2 = tuple(x + (1 if i == 0 else 0) for i, x in enumerate(lam))
        b = ev.evaluate(t, g, (lam2, mu))
        sh_r.append(_rel_diff(a.vector, b.vector))
        c = ev.evaluate(co.inv_point(g), co.inv_point(t))
        perm = ev.solver.co.iota_perm
        cv = [c.vector[perm[j]] for j in range(len(perm))]
        du_r.append(_rel_diff(cv, a.vector))
        bound = max(bound, 100 * (a.tail + b.tail + c.tail) + 1e4 * float(ev.field.eps))
    return [record("numeric.psi", "shift-path independence", sh_r, bound, seed),
            record("numeric.psi", "C_iota Psi(1/gamma, 1/t) = Psi(t, gamma)", du_r, bound, seed)]


def _rel_diff(a: Sequence, b: Sequence) -> float:
    num = max(float(abs(x - y)) for x, y in zip(a, b))
    den = max(max(float(abs(x)) for x in b), 1e-300)
    return num / den


def bispectral_residuals(ev: PsiEvaluator, engine: MacdonaldEngine, lam: Sequence[int], points: list,
                         side: str = "x", w=None, pull_in: bool = True, with_floor: bool = False) -> list:
    """Relative residuals of ``L_{m_lam} Phi^+_w = eigenvalue Phi^+_w``.

    x side: eigenvalue ``m_lam(gamma^{-1})``; y side: ``m_lam(t)``.  With
    ``pull_in=False`` the series is summed directly at every shifted point,
    so the residual measures the truncation error alone.  With
    ``with_floor`` each entry is ``(residual, floor)`` where the floor is
    the rounding level ``eps * sum |c_g Phi(g^{-1} p)| / |rhs|`` left by
    cancellation among the terms of L.
    """
    f = ev.field
    co = ev.co
    L = engine.macdonald_operator(lam, side)
    winv = ev.rs.inverse(w) if w is not None else None
    zero_shift = (ev.rs.zero(), ev.rs.zero())

    def fun(tt, gg):
        if winv is not None:
            gg = co.weyl_act(winv, gg)
        vec = ev.psi(tt, gg, None if pull_in else zero_shift)
        return ev.gauge.G(tt, gg) * ev.chi_plus(vec)

    out = []
    for t, g in points:
        if all(isinstance(x, type(mpq(0))) for x in tuple(t) + tuple(g)):
            # exact coefficients: avoids cancellation inside the normal form
            lhs = scale = f.coerce(0)
            for (gx, gy), c in L.terms_at(t, g).items():
                if c == 0:
                    continue
                tp, gp = engine.pull_back(gx, gy, t, g, engine.field)
                term = f.coerce(c) * fun(tuple(map(f.coerce, tp)), tuple(map(f.coerce, gp)))
                lhs += term
                scale += abs(term)
            t, g = tuple(map(f.coerce, t)), tuple(map(f.coerce, g))
        else:
            lhs, scale = L.apply(fun, t, g, f, with_scale=True)
        base = fun(t, g)
        if side == "x":
            eig = engine.monomial_symmetric(lam, co.inv_point(g), f)
        else:
            eig = engine.monomial_symmetric(lam, t, f)
        rhs = eig * base
        res = float(abs(lhs - rhs) / abs(rhs))
        floor = float(f.eps * (scale + abs(rhs)) / abs(rhs))
        out.append((res, floor) if with_floor else res)
    return out


def verify_bispectral_pointwise(ev: PsiEvaluator, engine: MacdonaldEngine, lams: Sequence, samples: int = 10,
                                seed: int = 0, depth: float = 1e-3, bound: float = 1e-6,
                                pull_in: bool = False) -> list[dict]:
    """Eigen-equations of ``Phi^+`` in both variables at deep points.

    Points are exact rationals so the coefficients of L are computed
    exactly; only Phi^+ is evaluated in floating point.

    A point passes when its residual is below ``bound``, or below 100 times
    its cancellation floor when that floor exceeds ``bound`` (the working
    precision is then too low to resolve the identity at that point).
    """
    rng = random.Random(seed)
    pts = [deep_rational_point(ev, rng, depth) for _ in range(samples)]
    out = []
    for lam in lams:
        for side in ("x", "y"):
            pairs = bispectral_residuals(ev, engine, lam, pts, side, pull_in=pull_in, with_floor=True)
            res = [r for r, _ in pairs]
            floor = max(fl for _, fl in pairs)
            ok = all(r <= max(bound, 100 * fl) for r, fl in pairs)
            out.append(record("macdonald.bispectral", f"L^{side}_m{list(lam)} Phi+ = eigenvalue Phi+",
                              res, bound, seed, ok, {"cancellationFloor": f"{floor:.6e}"}))
    return out


def verifyBispectralPointwise(ev, engine, lams, samples=10, seed=0):
    return verify_bispectral_pointwise(ev, engine, lams, samples, seed)


def verify_harish_chandra(ev: PsiEvaluator, engine: MacdonaldEngine, lam: Sequence[int], zeta: Sequence,
                          samples: int = 5, seed: int = 0, depth: float = 1e-3, bound: float = 1e-6) -> dict:
    """``G~^{-1} L^x G~`` has eigenvalue ``m_lam(zeta^{-1})`` on the
    theta-ratio modified ``Psi^+_w(., zeta)`` for every w."""
    rng = random.Random(seed)
    f = ev.field
    co = ev.co
    rs = ev.rs
    z = tuple(f.coerce(x) for x in zeta)
    L = engine.macdonald_operator(lam, "x")
    eig = engine.monomial_symmetric(lam, co.inv_point(z), f)
    w0 = rs.longest_element
    res = []
    for w in rs.weyl_group():
        winv = rs.inverse(w)
        wz = co.weyl_act(winv, z)
        a = co.inv_point(co.weyl_act(rs.mul(w0, winv), z))
        b = co.inv_point(co.weyl_act(w0, z))

        def psi_tilde(tt, _gg, wz=wz, a=a, b=b):
            ratio = ev.theta(Gauge._mul(tt, a)) / ev.theta(Gauge._mul(tt, b))
            return ratio * ev.psi_plus(tt, wz)

        def gauged(tt, gg, psi_tilde=psi_tilde):
            return ev.gauge.G_tilde(tt, z) * psi_tilde(tt, gg)

        for _ in range(samples):
            t, _g = deep_point(ev, rng, depth)
            lhs = L.apply(gauged, t, z, f) / ev.gauge.G_tilde(t, z)
            rhs = eig * psi_tilde(t, z)
            res.append(float(abs(lhs - rhs) / abs(rhs)))
    return record("numeric.phi", f"gauged spectral problem L~^x_m{list(lam)}", res, bound, seed)


def verify_tau_orbit_solves(ev: PsiEvaluator, samples: int = 10, seed: int = 0, span: float = 0.6,
                            bound: float | None = None) -> list[dict]:
    """Each column ``tau(e,w) Phi`` satisfies BqKZ for the fundamental pairs."""
    rng = random.Random(seed)
    rs = ev.rs
    co = ev.co
    f = ev.field
    n = rs.rank
    pairs = []
    for i in range(n):
        om = rs.fundamental_coweight(i)
        pairs.append((om, rs.zero()))
        pairs.append((rs.zero(), om))
    res = []
    for _ in range(samples):
        t = moderate_point(f, rng, n, span)
        g = moderate_point(f, rng, n, span)
        for w in ev.solver.ps.basis:
            col = ev.tau_column(w, t, g)
            for lam, mu in pairs:
                C = co.connection(lam, mu, t, g)
                shifted = ev.tau_column(w, co.shift(t, tuple(-x for x in lam)), co.shift(g, mu))
                res.append(_rel_diff(mat_vec(C, shifted), col))
    # the continuation multiplies by products of connection matrices, which
    # can amplify the series tail; allow six digits for that conditioning
    bnd = bound if bound is not None else max(1e6 * ev.ctx.tolerance(), 1e4 * float(f.eps))
    return [record("numeric.U", "tau(e,w) Phi solves BqKZ", res, bnd, seed)]


def verifyTauOrbitSolves(ev, samples=10, seed=0):
    return verify_tau_orbit_solves(ev, samples, seed)


def verify_det_u(ev: PsiEvaluator, seed: int = 0, span: float = 0.6, threshold: float = 1e-8) -> dict:
    """``det U`` relative to the product of column norms is bounded away from 0."""
    rng = random.Random(seed)
    f = ev.field
    t = moderate_point(f, rng, ev.rs.rank, span)
    g = moderate_point(f, rng, ev.rs.rank, span)
    U = ev.fundamental_u(t, g)
    n = len(U)
    det = determinant(U)
    norms = 1.0
    for j in range(n):
        norms *= math.sqrt(sum(float(abs(U[i][j])) ** 2 for i in range(n)))
    cond = float(abs(det)) / norms if norms else 0.0
    ok = cond > threshold
    return record("numeric.U", "det U != 0", [cond], threshold, seed, ok,
                  {"normalizedDet": f"{cond:.6e}"})


def _affine(rs: RootSystem):
    from .affweyl import AffineWeylGroup

    return AffineWeylGroup(rs)


__all__ = [
    "Gauge", "GaugeSingular", "IllConditioned", "NearPole", "NumericContext", "NumericField", "PsiEvaluator",
    "PsiValue", "Theta", "ThetaValue", "bispectral_residuals", "deep_point", "deep_rational_point", "jacobi_theta", "moderate_point",
    "verify_bispectral_pointwise", "verify_det_u", "verify_gauge", "verify_harish_chandra",
    "verify_jacobi_theta", "verify_psi_continuation", "verify_tau_orbit_solves", "verify_theta",
]
