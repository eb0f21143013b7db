"""Shared fixtures: cached setups for the small root systems."""

from __future__ import annotations

from functools import cache

import pytest
from hypothesis import HealthCheck, settings

from bqkz.rootdata import RootSystem
from bqkz.scalars import ParameterField, default_qbase
from bqkz.suites import Setup

settings.register_profile(
    "bqkz", deadline=None, derandomize=True, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("bqkz")

SMALL = [("A", 1), ("A", 2), ("B", 2), ("C", 2), ("G", 2)]


@cache
def root_system(t: str, n: int) -> RootSystem:
    return RootSystem(t, n)


@cache
def params(t: str, n: int, k=3) -> ParameterField:
    rs = root_system(t, n)
    return ParameterField(default_qbase(rs.e), rs.e, {"long": k})


@cache
def setup(t: str, n: int, degree: int = 2, dps: int = 30) -> Setup:
    """Default parameters q = 1/4 (where representable), k = 3."""
    return Setup(root_system(t, n), params(t, n), degree, seed=0, samples=3, dps=dps)


def ids(systems):
    return [f"{t}{n}" for t, n in systems]


@pytest.fixture(params=SMALL, ids=ids(SMALL))
def small(request) -> Setup:
    return setup(*request.param)


@pytest.fixture
def a1() -> Setup:
    return setup("A", 1, 4)


@pytest.fixture
def a2() -> Setup:
    return setup("A", 2, 2)


def all_pass(rows) -> list:
    """Identities of failing rows (empty when everything passed)."""
    return [(r["suite"], r["identity"], r.get("detail")) for r in rows if r["status"] != "pass"]


ACCEPTANCE_LINES: list[str] = []


def announce(number: int, title: str, ok: bool, detail: str = "") -> None:
    """Print one PASS/FAIL line for an acceptance criterion."""
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
