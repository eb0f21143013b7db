"""Uniform identity reports shared by the verification suites and the CLI.

Every record has the keys ``suite, identity, status, samples, maxResidual,
bound, seed``.  Residuals are serialized with a fixed format so that
reports are byte-identical across runs with the same seed.
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from importlib import resources

SCHEMA_VERSION = "1"

KEYS = ("suite", "identity", "status", "samples", "maxResidual", "bound", "seed")


def fmt(x) -> str:
    """Fixed-format magnitude: ``"0"`` or ``"1.234567e-12"``."""
    if x is None:
        return "null"
    v = float(abs(x))
    if v == 0:
        return "0"
    return f"{v:.6e}"


def record(suite: str, identity: str, residuals: Iterable, bound, seed, ok: bool | None = None,
           detail: dict | None = None) -> dict:
    """One report row.  ``ok`` defaults to ``max residual <= bound``."""
    res = [abs(x) for x in residuals]
    worst = max(res, default=0)
    if ok is None:
        ok = all(r <= bound for r in res) if bound is not None else worst == 0
    out = {
        "suite": suite,
        "identity": identity,
        "status": "pass" if ok else "fail",
        "samples": len(res),
        "maxResidual": fmt(worst),
        "bound": fmt(bound) if bound is not None else "0",
        "seed": seed,
    }
    if detail:
        out["detail"] = detail
    return out


def exact_record(suite: str, identity: str, samples: int, failures: int, seed) -> dict:
    """Row for an exact identity: the residual is the number of failures."""
    return {
        "suite": suite,
        "identity": identity,
        "status": "pass" if failures == 0 else "fail",
        "samples": samples,
        "maxResidual": str(failures),
        "bound": "0",
        "seed": seed,
    }


def schema() -> dict:
    """The JSON schema that ``bqkz verify`` reports validate against."""
    text = resources.files("bqkz").joinpath("schema/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


__all__ = ["KEYS", "SCHEMA_VERSION", "dumps", "exact_record", "fmt", "record", "schema"]
