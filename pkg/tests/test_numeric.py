"""Theta functions, the gauge and the continued solution in floating point."""

import random

import pytest
from gmpy2 import mpq

from bqkz.numeric import (
    NumericContext,
    NumericField,
    Theta,
    bispectral_residuals,
    deep_rational_point,
    jacobi_theta,
    verify_bispectral_pointwise,
    verify_det_u,
    verify_gauge,
    verify_jacobi_theta,
    verify_psi_continuation,
    verify_tau_orbit_solves,
    verify_theta,
)

from .conftest import SMALL, ids, params, root_system, setup


def nfield(t="A", n=1, dps=30):
    return NumericField.from_exact(params(t, n), dps)


def failing(rows):
    return [(r["identity"], r.get("detail")) for r in rows if r["status"] != "pass"]


def test_a1_theta_matches_direct_sum():
    # coweight lattice of A1: theta(t) = sum_n q^{n^2/4} t^n
    f = nfield()
    th = Theta(root_system("A", 1), f)
    ctx = f.ctx
    for x in (mpq(1, 3), mpq(2), mpq(-5, 7), mpq(40)):
        t = ctx.mpf(x.numerator) / x.denominator
        direct = ctx.fsum(ctx.mpf(f.q) ** (ctx.mpf(n * n) / 4) * t**n for n in range(-80, 81))
        assert abs(th((t,)) - direct) <= 1e-25 * abs(direct)


def test_jacobi_triple_product():
    f = nfield()
    ctx, q = f.ctx, f.q
    for z in (ctx.mpf("0.3"), ctx.mpf(-2), ctx.mpf("3.7")):
        series = ctx.fsum((-1) ** n * q ** (ctx.mpf(n * (n - 1)) / 2) * z**n for n in range(-60, 61))
        assert abs(ctx.qp(q, q) * jacobi_theta(z, q, ctx) - series) <= 1e-25 * max(abs(series), 1)


@pytest.mark.parametrize("t,n", SMALL, ids=ids(SMALL))
def test_theta_identities(t, n):
    rows = verify_theta(root_system(t, n), nfield(t, n), 20, 0)
    rows.append(verify_jacobi_theta(nfield(t, n), 20, 0))
    assert not failing(rows)


@pytest.mark.parametrize("t,n", SMALL, ids=ids(SMALL))
def test_gauge_identities(t, n):
    assert not failing(verify_gauge(setup(t, n).evaluator, 20, 0))


@pytest.mark.parametrize("t,n", [("A", 1), ("A", 2), ("B", 2)], ids=["A1", "A2", "B2"])
def test_psi_continuation(t, n):
    assert not failing(verify_psi_continuation(setup(t, n).evaluator, 3, 0))


def test_tail_estimate_monotone():
    ev = setup("A", 1, 4).evaluator
    assert ev.tail_estimate(1e-4) < ev.tail_estimate(1e-2)


def test_bispectral_a1():
    S = setup("A", 1, 4)
    rows = verify_bispectral_pointwise(S.evaluator, S.engine, S.anti_fundamental, 5, 0)
    assert not failing(rows)


def test_bispectral_residual_shrinks_with_degree():
    worst = []
    for d in (4, 6):
        S = setup("A", 1, d, 50)
        ev = S.evaluator
        rng = random.Random(0)
        pts = [deep_rational_point(ev, rng, 1e-3) for _ in range(4)]
        res = bispectral_residuals(ev, S.engine, S.anti_fundamental[0], pts, "x", pull_in=False)
        worst.append(max(res))
    assert worst[1] < worst[0] / 100


def test_tau_columns_and_det_u():
    ev = setup("A", 1, 4).evaluator
    assert not failing(verify_tau_orbit_solves(ev, 5, 0))
    assert verify_det_u(ev, 0)["status"] == "pass"


def test_context_tolerance():
    assert NumericContext(dps=30).tolerance() == pytest.approx(1e-27)
    assert NumericContext(dps=30, tail_tolerance=1e-9).tolerance() == 1e-9
