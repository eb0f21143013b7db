"""Verification suites run by ``bqkz verify``.

Each suite takes a :class:`Setup` and returns report rows (see
:mod:`bqkz.report`).  Exact identities report the number of failures as
their residual; numeric ones report a residual and the bound it was
compared against.  All sampling is driven by ``random.Random(seed)``.
"""

from __future__ import annotations

import itertools
import random
import time
from collections.abc import Callable
from functools import cached_property

from gmpy2 import mpq

from .affweyl import AffineWeylGroup
from .cocycle import Cocycle, CocyclePole, b_fun, c_fun, random_point, random_rational
from .hecke import HeckeAlgebra
from .laurent import Laurent
from .linalg import determinant, identity, mat_mul
from .macdonald import MacdonaldEngine, generic_point, iota_apply, laurent_test_function, symmetric_test_function
from .prinser import PrincipalSeries
from .report import exact_record
from .rootdata import RootSystem, iter_small_weights
from .scalars import ParameterField
from .series import SeriesExpander
from .solver import PsiSolver


class Setup:
    """Lazily built objects for one (root system, parameters, degree)."""

    def __init__(self, rs: RootSystem, field: ParameterField, degree: int, seed: int = 0,
                 samples: int = 5, dps: int = 30):
        self.rs = rs
        self.field = field
        self.degree = degree
        self.seed = seed
        self.samples = samples
        self.dps = dps

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")

    @cached_property
    def W(self) -> AffineWeylGroup:
        return AffineWeylGroup(self.rs)

    @cached_property
    def H(self) -> HeckeAlgebra:
        return HeckeAlgebra(self.W, self.field.k)

    @cached_property
    def ps(self) -> PrincipalSeries:
        return PrincipalSeries(self.H)

    @cached_property
    def co(self) -> Cocycle:
        return Cocycle(self.ps, self.field)

    @cached_property
    def expander(self) -> SeriesExpander:
        return SeriesExpander(self.co)

    @cached_property
    def solver(self) -> PsiSolver:
        return PsiSolver(self.co, self.expander)

    @cached_property
    def sol(self):
        return self.solver.solve(self.degree)

    @cached_property
    def engine(self) -> MacdonaldEngine:
        return MacdonaldEngine(self.W, self.field)

    @cached_property
    def evaluator(self):
        from .numeric import NumericContext, PsiEvaluator

        return PsiEvaluator(self.solver, self.sol, NumericContext(dps=self.dps, seed=self.seed))

    @property
    def anti_fundamental(self) -> list:
        return [tuple(-x for x in self.rs.fundamental_coweight(i)) for i in range(self.rs.rank)]


def _count(pairs) -> tuple[int, int]:
    n = bad = 0
    for ok in pairs:
        n += 1
        bad += not ok
    return n, bad


def _rows(suite: str, seed, checks: list[tuple[str, Callable]]) -> list[dict]:
    out = []
    for name, fn in checks:
        n, bad = _count(fn())
        if n == 0:  # e.g. commutativity needs two operators
            continue
        out.append(exact_record(suite, name, n, bad, seed))
    return out


# ----------------------------------------------------------------------
def suite_rootdata(S: Setup) -> list[dict]:
    rs = S.rs
    W0 = rs.weyl_group()
    weights = list(iter_small_weights(rs.rank, 1))

    def pairing():
        for lam, mu in itertools.product(weights, repeat=2):
            for w in W0:
                yield rs.inner(rs.act(w, lam), rs.act(w, mu)) == rs.inner(lam, mu)

    def saturated():
        for lam in weights:
            base = rs.saturated_set(lam)
            for w in W0:
                yield rs.saturated_set(rs.act(w, lam)) == base

    def minuscule():
        for j in S.W.minuscule:
            om = rs.fundamental_coweight(j)
            yield rs.saturated_set(om) == set(rs.orbit(om))

    def dominant_gap():
        for lam in weights:
            lp, _ = rs.dominant_rep(lam)
            for w in W0:
                d = tuple(a - b for a, b in zip(lp, rs.act(w, lp)))
                cc = rs.coroot_coords(d)
                yield all(x.denominator == 1 and x >= 0 for x in map(mpq, cc))

    return _rows("rootdata", S.seed, [("pairing is W0-invariant", pairing),
                                      ("saturated sets are W0-invariant", saturated),
                                      ("minuscule saturated set is the orbit", minuscule),
                                      ("lam+ - w lam+ in Q+", dominant_gap)])


def suite_affweyl(S: Setup) -> list[dict]:
    W = S.W
    rs = S.rs
    els = W.elements_up_to_length(3 if rs.rank <= 2 else 2)

    def subadditive():
        for a, b in itertools.product(els, repeat=2):
            yield W.length(W.mul(a, b)) <= W.length(a) + W.length(b)

    def round_trip():
        for a in els:
            word, om = W.reduced_word(a)
            yield W.from_word(word, om, omega_left=False) == a and len(word) == W.length(a)

    def classes():
        for cls in W.reflection_classes():
            yield len({W.simple_class(i) for i in cls}) == 1

    def bruhat_subword():
        fins = rs.weyl_group()
        for v in fins:
            word = rs.word(v)
            below = {rs.from_word(sub) for r in range(len(word) + 1)
                     for sub in itertools.combinations(word, r)}
            for u in fins:
                yield W.finite_bruhat_leq(u, v) == (u in below)

    return _rows("affweyl", S.seed, [("length is subadditive", subadditive),
                                     ("reduced word round trip", round_trip),
                                     ("reflection classes carry one label", classes),
                                     ("Bruhat order on W0 equals subword order", bruhat_subword)])


def _coxeter_m(W: AffineWeylGroup, i: int, j: int) -> int | None:
    g = W.mul(W.simple[i], W.simple[j])
    x = g
    for m in range(1, 7):
        if x == W.identity:
            return m
        x = W.mul(x, g)
    return None


def suite_hecke(S: Setup) -> list[dict]:
    H = S.H
    W = S.W
    rs = S.rs
    rng = S.rng("hecke")
    n = W.N
    weights = list(iter_small_weights(rs.rank, 1))

    def quadratic():
        for i in range(n + 1):
            k = H.kvals[i]
            T = H.Ti(i)
            yield T * T == T * (k - 1 / k) + H.one()

    def braid():
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                m = _coxeter_m(W, i, j)
                if m is None:
                    continue
                a = [H.Ti(i if r % 2 == 0 else j) for r in range(m)]
                b = [H.Ti(j if r % 2 == 0 else i) for r in range(m)]
                pa, pb = H.one(), H.one()
                for x, y in zip(a, b):
                    pa, pb = pa * x, pb * y
                yield pa == pb

    def assoc():
        els = W.elements_up_to_length(2)
        for _ in range(S.samples):
            a, b, c = (H.T(rng.choice(els)) for _ in range(3))
            yield (a * b) * c == a * (b * c)

    def y_commute():
        for _ in range(S.samples):
            lam, mu = rng.choice(weights), rng.choice(weights)
            yield H.Y(lam) * H.Y(mu) == H.Y(mu) * H.Y(lam)
            yield H.Y(lam) * H.Y(mu) == H.Y(tuple(a + b for a, b in zip(lam, mu)))

    def lusztig():
        for lam in weights:
            for j in range(1, n + 1):
                s = rs.simple_reflections[j - 1]
                lhs = H.Y(lam) * H.Ti(j)
                rhs = H.Ti(j) * H.Y(rs.act(s, lam))
                for mu, c in H.lusztig_delta(lam, j).terms.items():
                    rhs = rhs + H.Y(mu) * c
                yield lhs == rhs

    def central():
        for j in range(rs.rank):
            m = H.monomial_symmetric(rs.fundamental_coweight(j))
            for i in range(n + 1):
                yield m * H.Ti(i) == H.Ti(i) * m

    def circ():
        Hx = H.inverted()
        w0 = S.W.finite(rs.longest_element)
        Tw0, Tw0i = H.T(w0), H.inverse_T(w0)
        for j in range(rs.rank):
            om = rs.fundamental_coweight(j)
            yield H.circ_map(Hx.Y(om)) == Tw0 * H.Y(rs.act(rs.longest_element, om)) * Tw0i
            m = Hx.monomial_symmetric(om)
            yield H.circ_map(m) == H.monomial_symmetric(om)

    return _rows("hecke", S.seed, [("quadratic relation", quadratic), ("braid relations", braid),
                                   ("associativity", assoc), ("Y commutativity", y_commute),
                                   ("Lusztig identity", lusztig), ("m_lam(Y) is central", central),
                                   ("circ map on Y and m_lam(Y)", circ)])


def suite_prinser(S: Setup) -> list[dict]:
    rs = S.rs
    W = S.W
    P = S.ps
    H = S.H
    rng = S.rng("prinser")
    lams = [lam for lam in iter_small_weights(rs.rank, 1) if rs.height(rs.dominant_rep(lam)[0]) <= 3]

    def triangular():
        for lam in lams:
            E = P.eta(H.Y(lam))
            sat = rs.saturated_set(rs.dominant_rep(lam)[0])
            for c, w in enumerate(P.basis):
                for r, u in enumerate(P.basis):
                    f = E[r, c]
                    if u == w:
                        yield f == Laurent.monomial(rs.act(rs.inverse(w), lam))
                    elif f:
                        yield W.finite_bruhat_leq(u, w) and all(mu in sat for mu in f.terms)

    def xi_basis():
        g = random_point(rng, rs.rank)
        yield determinant(P.xi_matrix_at(g)) != 0

    def algebra_map():
        els = W.elements_up_to_length(1)
        for _ in range(min(S.samples, 3)):
            a, b = H.T(rng.choice(els)), H.T(rng.choice(els))
            yield P.eta(a * b) == P.eta(a) * P.eta(b)

    return _rows("prinser", S.seed, [("eta(Y^lam) triangular with monomial diagonal", triangular),
                                     ("xi_w form a basis", xi_basis), ("eta is multiplicative", algebra_map)])


def suite_cocycle(S: Setup, unitarity_samples: int = 50, holonomy_points: int = 2) -> list[dict]:
    rs = S.rs
    W = S.W
    co = S.co
    rng = S.rng("cocycle")
    I = identity(co.dim)

    def unitarity():
        for i in range(W.N + 1):
            done = 0
            while done < unitarity_samples:
                g, z = random_point(rng, rs.rank), random_rational(rng)
                try:
                    ok = mat_mul(co.r_matrix(i, z, g), co.r_matrix(i, 1 / z, g)) == I
                except CocyclePole:  # z landed on k^{+-2}; draw again
                    continue
                done += 1
                yield ok

    def b_plus_c():
        for i in range(W.N + 1):
            k = S.field.k[W.simple_class(i)]
            for _ in range(unitarity_samples):
                z = random_rational(rng)
                yield b_fun(z, k) + c_fun(z, k) == k

    fund = [rs.zero()] + [rs.fundamental_coweight(i) for i in range(rs.rank)]
    pairs = list(itertools.product(fund, fund))[1:]

    def holonomy():
        done = 0
        while done < holonomy_points:
            t, g = random_point(rng, rs.rank), random_point(rng, rs.rank)
            try:
                checks = []
                for (l, m), (nu, xi) in itertools.combinations(pairs, 2):
                    lhs = mat_mul(co.connection(l, m, t, g),
                                  co.connection(nu, xi, co.shift(t, tuple(-x for x in l)), co.shift(g, m)))
                    rhs = mat_mul(co.connection(nu, xi, t, g),
                                  co.connection(l, m, co.shift(t, tuple(-x for x in nu)), co.shift(g, xi)))
                    checks.append(lhs == rhs)
            except CocyclePole:  # the point sits on a pole; draw another
                continue
            done += 1
            yield from checks

    def cocycle_law():
        els = W.elements_up_to_length(2)
        done = 0
        while done < S.samples:
            a, b = rng.choice(els), rng.choice(els)
            t, g = random_point(rng, rs.rank), random_point(rng, rs.rank)
            try:
                lhs = co.cocycle_x(W.mul(a, b), t, g)
                rhs = mat_mul(co.cocycle_x(a, t, g), co.cocycle_x(b, co.act_point(W.inv(a), t), g))
            except CocyclePole:
                continue
            done += 1
            yield lhs == rhs

    def delta_k():
        for j in range(rs.rank):
            lam = rs.fundamental_coweight(j)
            prod = mpq(1)
            for a in W.inversion_set(W.translation(lam)):
                prod *= S.field.k[W.root_class(a)]
            yield co.delta_pow(lam) == prod

    def dominant_split():
        lams = [lam for lam in iter_small_weights(rs.rank, 1) if any(c < 0 for c in lam)]
        done = 0
        while done < S.samples:
            lam = rng.choice(lams)
            t, g = random_point(rng, rs.rank), random_point(rng, rs.rank)
            try:
                ok = co.connection(lam, rs.zero(), t, g) == co.connection_via_dominant(lam, t, g)
            except CocyclePole:
                continue
            done += 1
            yield ok

    return _rows("cocycle", S.seed, [("R-matrix unitarity", unitarity), ("b + c = k", b_plus_c),
                                     ("holonomicity", holonomy), ("cocycle law", cocycle_law),
                                     ("delta_k^lam = k(t(lam))", delta_k),
                                     ("C_(lam,e) via dominant split", dominant_split)])


def suite_series(S: Setup, degree: int | None = None) -> list[dict]:
    rs = S.rs
    ex = S.expander
    D = min(S.degree, 3) if degree is None else degree
    As, Bs = S.co.asymptotic_constants()

    def nonneg():
        for i in range(rs.rank):
            yield ex.expand_gauged_a(i, D).is_nonnegative()
            yield ex.expand_gauged_b(i, D).is_nonnegative()

    def constants():
        for i in range(rs.rank):
            yield ex.expand_gauged_a(i, D).constant_term() == As[i]
            yield ex.expand_gauged_b(i, D).constant_term() == Bs[i]

    def b_direct():
        for j in range(rs.rank):
            yield ex.expand_gauged_b(j, D).coeffs == ex.expand_gauged_b_direct(j, D).coeffs

    return _rows("series", S.seed, [("exponents in Q+ x Q+", nonneg),
                                    ("constant terms are the asymptotic idempotents", constants),
                                    ("B from A by iota equals direct B", b_direct)])


def suite_solver(S: Setup) -> list[dict]:
    solver = S.solver
    sol = S.sol
    out = []
    h = solver.verify_holonomy(sol)
    out.append(exact_record("solver", "all gauged equations hold", len(h["equations"]),
                            sum(v["nonzero"] > 0 for v in h["equations"].values()), S.seed))
    other = solver.solve(S.degree, "largest")
    out.append(exact_record("solver", "equation choice does not matter", 1, int(other.K != sol.K), S.seed))
    d = solver.verify_duality(sol)
    out.append(exact_record("solver", "C_iota K[a,b] = K[b,a]", d["checked"], len(d["failures"]), S.seed))
    g = solver.verify_gamma0(sol)
    out.append(exact_record("solver", "Gamma_0 is a multiple of T_w0", 1, int(not g["ok"]), S.seed))
    if S.degree >= 1:
        low = solver.solve(S.degree - 1)
        same = sol.truncate(S.degree - 1, solver.grading).K == low.K
        out.append(exact_record("solver", "truncation stability", 1, int(not same), S.seed))
    return out


def suite_macdonald(S: Setup) -> list[dict]:
    E = S.engine
    W = S.W
    rs = S.rs
    n = rs.rank
    rng = S.rng("macdonald")
    samples = S.samples

    def pt():
        return generic_point(rng, n)

    def quadratic():
        for side in "xy":
            for i in range(n + 1):
                rT = E.rho_generator(i, side)
                kap = E._kappa(i, side)
                Q = (rT - E.identity_op().scale(kap)) * (rT + E.identity_op().scale(1 / kap))
                f = laurent_test_function(rng, n)
                yield Q.apply(f, pt(), pt()) == 0
                yield rT.apply(lambda a, b: 1, pt(), pt()) == kap

    def faithful():
        els = W.elements_up_to_length(2)
        for side in "xy":
            H = E.hecke(side)
            for _ in range(samples):
                a, b = rng.choice(els), rng.choice(els)
                lhs = E.rho_of(H.mul(H.T(a), H.T(b)), side)
                rhs = E.rho_T(a, side) * E.rho_T(b, side)
                f, t, g = laurent_test_function(rng, n), pt(), pt()
                yield lhs.apply(f, t, g) == rhs.apply(f, t, g)

    def duality():
        for i in range(n + 1):
            f, t, g = laurent_test_function(rng, n), pt(), pt()
            yield E.rho_generator_inverse(i, "y").apply(f, t, g) == iota_apply(E.rho_generator(i, "x"), f, t, g)
        for om in W.omega_elements:
            f, t, g = laurent_test_function(rng, n), pt(), pt()
            yield E.group_op(om, "y").apply(f, t, g) == iota_apply(E.group_op(om, "x"), f, t, g)

    lams = S.anti_fundamental
    Ls = {(lam, side): E.macdonald_operator(lam, side) for lam in lams for side in "xy"}

    def leading():
        for lam in lams:
            L = Ls[(lam, "x")]
            for _ in range(samples):
                t, g = pt(), pt()
                for mu, w in E.orbit_representatives(lam).items():
                    yield L.coefficient_at(W.translation(mu), W.identity, t, g) == E.leading_product(lam, w, t)

    def l_duality():
        for lam in lams:
            f, t, g = laurent_test_function(rng, n), pt(), pt()
            yield Ls[(lam, "y")].apply(f, t, g) == iota_apply(Ls[(lam, "x")], f, t, g)

    def restriction():
        for lam in lams:
            f = symmetric_test_function(E, rs.fundamental_coweight(0), rs.fundamental_coweight(n - 1))
            t, g = pt(), pt()
            yield E.rho_symmetric(lam, "x").apply(f, t, g) == Ls[(lam, "x")].apply(f, t, g)

    def commute():
        for a, b in itertools.combinations(lams, 2):
            C = Ls[(a, "x")] * Ls[(b, "x")] - Ls[(b, "x")] * Ls[(a, "x")]
            f, t, g = laurent_test_function(rng, n), pt(), pt()
            yield C.apply(f, t, g) == 0

    def w0_invariant():
        for lam in lams:
            for side in "xy":
                L = Ls[(lam, side)]
                for v in rs.simple_reflections:
                    g = W.finite(v)
                    C = E.group_op(g, side) * L * E.group_op(W.inv(g), side) - L
                    yield all(c == 0 for c in C.terms_at(pt(), pt()).values())

    def leading_term():
        r = E.verify_leading_term(S.sol)
        yield from (True for _ in range(r["checked"] - len(r["failures"])))
        yield from (False for _ in r["failures"])

    def k_difference():
        yield E.k_difference_residual(rs.fundamental_coweight(0), S.degree) == {}

    return _rows("macdonald", S.seed, [
        ("Cherednik quadratic relation", quadratic), ("rho is multiplicative", faithful),
        ("rho^y(h circ) = iota rho^x(h) iota", duality), ("leading coefficients of L", leading),
        ("L^y = iota L^x iota", l_duality), ("Res restriction identity", restriction),
        ("Macdonald operators commute", commute), ("L is W0-invariant", w0_invariant),
        ("chi_+(K[0,b]) = k(w0) K(gamma) coefficients", leading_term),
        ("K(gamma) q-difference property", k_difference)])


def suite_numeric(S: Setup) -> list[dict]:
    from . import numeric as nm

    ev = S.evaluator
    seed = S.seed
    out = []
    out += nm.verify_theta(S.rs, ev.field, 20, seed)
    out.append(nm.verify_jacobi_theta(ev.field, 20, seed))
    out += nm.verify_gauge(ev, 20, seed)
    out += nm.verify_psi_continuation(ev, 3, seed)
    if S.rs.rank == 1:
        out += nm.verify_bispectral_pointwise(ev, S.engine, S.anti_fundamental, 10, seed, pull_in=True)
        out += nm.verify_tau_orbit_solves(ev, 5, seed)
        out.append(nm.verify_det_u(ev, seed))
    else:
        # one deep point per operator keeps rank-two runs short
        out += nm.verify_bispectral_pointwise(ev, S.engine, S.anti_fundamental, 1, seed, depth=1e-5)
    return out


SUITES: list[tuple[str, Callable]] = [
    ("rootdata", suite_rootdata), ("affweyl", suite_affweyl), ("hecke", suite_hecke),
    ("prinser", suite_prinser), ("cocycle", suite_cocycle), ("series", suite_series),
    ("solver", suite_solver), ("macdonald", suite_macdonald), ("numeric", suite_numeric),
]


def run_all(S: Setup, only: list[str] | None = None, log: Callable | None = None) -> tuple[list[dict], dict]:
    """Run the suites in dependency order; returns (rows, timings)."""
    rows: list[dict] = []
    timings = {}
    for name, fn in SUITES:
        if only and name not in only:
            continue
        t0 = time.perf_counter()
        try:
            rows += fn(S)
        except Exception as exc:  # noqa: BLE001 - a crash is reported as a failing row
            rows.append({"suite": name, "identity": "suite completed", "status": "fail", "samples": 0,
                         "maxResidual": "null", "bound": "0", "seed": S.seed,
                         "detail": {"error": f"{type(exc).__name__}: {exc}"}})
        timings[name] = time.perf_counter() - t0
        if log:
            log(name, timings[name])
    return rows, timings


__all__ = ["SUITES", "Setup", "run_all"] + [name for name in dir() if name.startswith("suite_")]
