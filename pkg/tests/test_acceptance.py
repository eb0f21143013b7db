"""Acceptance criteria, each run at its stated size and tolerance."""

import math
import random
import time

import pytest
from gmpy2 import mpq

from bqkz.cli import main
from bqkz.numeric import (
    bispectral_residuals,
    deep_rational_point,
    verify_det_u,
    verify_gauge,
    verify_jacobi_theta,
    verify_tau_orbit_solves,
    verify_theta,
)
from bqkz.suites import suite_cocycle, suite_hecke, suite_series, suite_solver

from .conftest import SMALL, all_pass, announce, setup

K, Q = mpq(3), mpq(1, 4)


def test_1_exact_hecke_suite():
    t0 = time.perf_counter()
    bad = []
    for t, n in SMALL:
        bad += all_pass(suite_hecke(setup(t, n)))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    announce(1, "Hecke relations, Lusztig, centrality, circ on A1 A2 B2 C2 G2", ok, f"{dt:.1f} s, failures {bad}")
    assert ok


def test_2_unitarity_and_b_plus_c():
    bad, low = [], []
    for t, n in SMALL:
        S = setup(t, n)
        rows = [r for r in suite_cocycle(S, 50, 1) if r["identity"] in ("R-matrix unitarity", "b + c = k")]
        bad += all_pass(rows)
        gens = S.W.N + 1
        low += [(t + str(n), r["identity"]) for r in rows if r["samples"] < 50 * gens]
    ok = not bad and not low and len(rows) == 2
    announce(2, "R-matrix unitarity and b + c = k, 50 samples per generator", ok, f"failures {bad + low}")
    assert ok


def test_3_holonomy():
    bad = []
    for t, n in SMALL:
        rows = [r for r in suite_cocycle(setup(t, n), 1, 20) if r["identity"] == "holonomicity"]
        bad += all_pass(rows)
        bad += [t + str(n)] if rows[0]["samples"] < 20 else []
    announce(3, "holonomicity at 20 points, all fundamental pairs, rank <= 2", not bad, f"failures {bad}")
    assert not bad


def test_4_series_nonnegativity():
    bad = []
    for t, n in SMALL:
        bad += all_pass(suite_series(setup(t, n, 3), 3))
    announce(4, "A_i, B_j at D = 3: exponents in Q+ x Q+, idempotent constant terms", not bad, f"failures {bad}")
    assert not bad


def test_5_solver():
    t0 = time.perf_counter()
    bad = []
    for t, n, d in (("A", 1, 4), ("A", 2, 3)):
        S = setup(t, n, d)
        rows = suite_solver(S)
        bad += all_pass(rows)
        names = {r["identity"] for r in rows}
        bad += [] if {"all gauged equations hold", "equation choice does not matter", "C_iota K[a,b] = K[b,a]",
                      "Gamma_0 is a multiple of T_w0"} <= names else ["missing rows"]
    dt = time.perf_counter() - t0
    ok = not bad and dt < 120
    announce(5, "Psi solver A1 D=4, A2 D=3: equations, rerun, duality, Gamma_0", ok, f"{dt:.1f} s, failures {bad}")
    assert ok


def test_6_leading_term():
    bad = []
    for t, n, d in (("A", 1, 4), ("A", 2, 3)):
        S = setup(t, n, d)
        rep = S.engine.verify_leading_term(S.sol)
        bad += rep["failures"]
    S = setup("A", 1, 4)
    grade_one = S.engine.chi_plus(S.sol.K[((0,), (2,))], S.ps.basis)
    oracle = K * Q * (K**2 - 1) / (1 - Q)
    ok = not bad and grade_one == oracle
    announce(6, "chi_+(K[0,b]) = k(w0) [gamma^b] K(gamma); A1 grade one", ok, f"grade one {grade_one} vs {oracle}")
    assert ok


def test_7_theta_and_gauge():
    bad = []
    for t, n in SMALL:
        S = setup(t, n)
        rows = verify_theta(S.rs, S.evaluator.field, 20, 0) + verify_gauge(S.evaluator, 20, 0)
        rows.append(verify_jacobi_theta(S.evaluator.field, 20, 0))
        bad += all_pass(rows)
        bad += [r["identity"] for r in rows if r["samples"] < 20]
    announce(7, "theta functional equation, gauge law, iota(G) = G at 20 points", not bad, f"failures {bad}")
    assert not bad


def _residuals(degree):
    S = setup("A", 1, degree, 50)
    ev = S.evaluator
    rng = random.Random(0)
    pts = [deep_rational_point(ev, rng, 1e-3) for _ in range(10)]
    lam = S.anti_fundamental[0]
    return {side: bispectral_residuals(ev, S.engine, lam, pts, side, pull_in=False) for side in "xy"}


def _mean_log(res):
    return sum(math.log10(max(r, 1e-300)) for r in res) / len(res)


def test_8_bispectral():
    runs = {d: _residuals(d) for d in (4, 5, 6)}
    worst = max(max(v) for v in runs[6].values())
    slopes = {}
    for side in "xy":
        logs = [_mean_log(runs[d][side]) for d in (4, 5, 6)]
        slopes[side] = (logs[2] - logs[0]) / 2
        monotone = logs[0] > logs[1] > logs[2]
        slopes[side] = slopes[side] if monotone else 0.0
    ok = worst < 1e-6 and all(s < -1 for s in slopes.values())
    detail = f"max residual {worst:.2e}, log10 slope per degree x {slopes['x']:.2f} y {slopes['y']:.2f}"
    announce(8, "A1 D=6 bispectral residuals at 10 deep points, geometric decay in D", ok, detail)
    assert ok


def test_9_fundamental_solution():
    ev = setup("A", 1, 4).evaluator
    rows = verify_tau_orbit_solves(ev, 10, 0) + [verify_det_u(ev, 0)]
    bad = all_pass(rows)
    announce(9, "tau(e,w) Phi columns solve BqKZ at 10 points; det U != 0", not bad,
             f"max residual {rows[0]['maxResidual']}, normalized det {rows[1]['detail']['normalizedDet']}")
    assert not bad


@pytest.mark.parametrize("argv", [["--type", "A", "--rank", "1"]])
def test_10_determinism(tmp_path, capsys, argv):
    outs = []
    for name in ("first.json", "second.json"):
        path = tmp_path / name
        code = main(["verify", *argv, "--seed", "7", "-o", str(path)])
        outs.append((code, path.read_bytes()))
    capsys.readouterr()
    ok = outs[0] == outs[1] and outs[0][0] == 0
    announce(10, "verify twice with the same seed gives byte-identical reports", ok, f"{len(outs[0][1])} bytes")
    assert ok
