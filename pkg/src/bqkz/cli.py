"""Command line interface: ``bqkz verify | psi | eval | report``.

Exit codes: 0 success, 1 a verification failed, 2 bad configuration.

Configuration comes from flags and an optional ``--config`` file of
``key = value`` lines (``#`` starts a comment).  Explicit flags win over
the file, which wins over the built-in defaults.  Recognized keys are the
long flag names with dashes or underscores: ``type, rank, q, qbase, k,
k-long, k-short, degree, seed, samples, dps, output``.

``BQKZ_WORKERS`` caps the number of worker processes ``verify`` uses to
run independent suites (default 1, i.e. sequential).  Results are merged
in suite order, so reports do not depend on it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
import warnings
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from .report import SCHEMA_VERSION, dumps
from .rootdata import RootSystem, UnsupportedType
from .scalars import BqkzError, ConfigError, ParameterField, default_qbase, format_rational, integer_root, rational

log = logging.getLogger("bqkz")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

DEFAULTS = {
    "type": "A", "rank": 1, "q": None, "qbase": None, "k": "3", "k_long": None, "k_short": None,
    "degree": None, "seed": 0, "samples": 5, "dps": 30, "output": None,
}


@dataclass
class RunConfig:
    type: str
    rank: int
    qbase: mpq
    k: dict
    degree: int
    seed: int = 0
    samples: int = 5
    dps: int = 30
    output: str | None = None
    rs: RootSystem = field(default=None, repr=False)
    params: ParameterField = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "type": self.type, "rank": self.rank, "qbase": format_rational(self.qbase),
            "q": format_rational(self.params.q), "e": self.rs.e,
            "k": {c: format_rational(v) for c, v in sorted(self.params.k.items())},
            "degree": self.degree, "seed": self.seed, "samples": self.samples, "dps": self.dps,
        }


def read_config_file(path: str) -> dict:
    """Parse ``key = value`` lines."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from exc
    for no, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_").lower()
        if key not in DEFAULTS:
            raise ConfigError(f"{path}:{no}: unknown key {key!r}")
        out[key] = val
    return out


def _int(name: str, val, lo: int | None = None) -> int:
    try:
        n = int(val)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: expected an integer, got {val!r}") from exc
    if lo is not None and n < lo:
        raise ConfigError(f"{name}: must be at least {lo}")
    return n


def _rat(name: str, val) -> mpq:
    try:
        return rational(str(val))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def _parse_k(spec: str) -> dict:
    """``"3"`` or ``"long=3,short=2"``."""
    out = {}
    for part in str(spec).split(","):
        part = part.strip()
        if "=" in part:
            cls, val = (s.strip() for s in part.split("=", 1))
            if cls not in ("long", "short"):
                raise ConfigError(f"k: unknown class {cls!r} (use long/short)")
            out[cls] = _rat("k", val)
        else:
            out["long"] = _rat("k", part)
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    raw = dict(DEFAULTS)
    if getattr(args, "config", None):
        raw.update(read_config_file(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    type_label = str(raw["type"]).upper()
    rank = _int("rank", raw["rank"], 1)
    try:
        rs = RootSystem(type_label, rank)
    except (UnsupportedType, KeyError, ValueError) as exc:
        raise ConfigError(f"type: unsupported root system {type_label}{rank}") from exc
    if raw["qbase"] is not None:
        qbase = _rat("qbase", raw["qbase"])
    elif raw["q"] is not None:
        q = _rat("q", raw["q"])
        if not 0 < q < 1:
            raise ConfigError("qbase must lie in (0,1)")
        qbase = integer_root(q, rs.e)
        if qbase is None:
            raise ConfigError(f"q: {format_rational(q)} has no rational {rs.e}-th root; pass --qbase instead")
    else:
        qbase = default_qbase(rs.e)
    k = _parse_k(raw["k"])
    if raw["k_long"] is not None:
        k["long"] = _rat("k-long", raw["k_long"])
    if raw["k_short"] is not None:
        k["short"] = _rat("k-short", raw["k_short"])
    fld = ParameterField(qbase, rs.e, k)
    degree = raw["degree"]
    degree = (4 if rank == 1 else 2) if degree is None else _int("degree", degree, 0)
    cfg = RunConfig(type_label, rank, qbase, dict(fld.k), degree, _int("seed", raw["seed"]),
                    _int("samples", raw["samples"], 1), _int("dps", raw["dps"], 10), raw["output"])
    cfg.rs, cfg.params = rs, fld
    return cfg


def _setup(cfg: RunConfig):
    from .suites import Setup

    return Setup(cfg.rs, cfg.params, cfg.degree, cfg.seed, cfg.samples, cfg.dps)


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise BqkzError(f"cannot write {path}: {exc.strerror}") from exc


# ----------------------------------------------------------------------
# verify
def _run_suite(cfg_json: dict, name: str) -> list[dict]:
    """Worker entry point: rebuild the setup and run one suite."""
    from .suites import Setup, run_all

    rs = RootSystem(cfg_json["type"], cfg_json["rank"])
    fld = ParameterField(rational(cfg_json["qbase"]), rs.e, {c: rational(v) for c, v in cfg_json["k"].items()})
    S = Setup(rs, fld, cfg_json["degree"], cfg_json["seed"], cfg_json["samples"], cfg_json["dps"])
    return run_all(S, [name])[0]


def workers() -> int:
    raw = os.environ.get("BQKZ_WORKERS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"BQKZ_WORKERS: expected an integer, got {raw!r}") from None
    return max(1, min(n, os.cpu_count() or 1))


def verify_document(cfg: RunConfig, only: Sequence[str] | None = None) -> dict:
    """Run the suites and return the report document."""
    from .suites import SUITES, run_all

    known = [n for n, _ in SUITES]
    unknown = sorted(set(only or ()) - set(known))
    if unknown:
        raise ConfigError(f"suites: unknown suite(s) {', '.join(unknown)}; choose from {', '.join(known)}")
    names = [n for n in known if not only or n in only]
    doc = {"schemaVersion": SCHEMA_VERSION, "config": cfg.to_json(), "results": [],
           "status": "pass", "firstFailure": None}

    def flush():
        if cfg.output:
            _write(dumps(doc), cfg.output)

    def merge(name, rows, seconds):
        log.info("suite %s: %d identities in %.2f s", name, len(rows), seconds)
        doc["results"].extend(rows)
        bad = next((r for r in rows if r["status"] != "pass"), None)
        if bad and doc["firstFailure"] is None:
            doc["status"] = "fail"
            doc["firstFailure"] = bad["suite"]
        flush()  # partial report after every suite

    n = workers()
    if n == 1:
        S = _setup(cfg)
        for name in names:
            t0 = time.perf_counter()
            rows, _ = run_all(S, [name])
            merge(name, rows, time.perf_counter() - t0)
    else:
        t0 = time.perf_counter()
        cj = cfg.to_json()
        with ProcessPoolExecutor(max_workers=n) as pool:
            futs = [(name, pool.submit(_run_suite, cj, name)) for name in names]
            for name, fut in futs:
                merge(name, fut.result(), time.perf_counter() - t0)
    return doc


def cmd_verify(cfg: RunConfig, args) -> int:
    only = args.suites.split(",") if args.suites else None
    t0 = time.perf_counter()
    doc = verify_document(cfg, only)
    log.info("verify finished in %.2f s", time.perf_counter() - t0)
    if not cfg.output:
        _write(dumps(doc), None)
    if doc["status"] != "pass":
        print(f"verification failed; first failing suite: {doc['firstFailure']}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# ----------------------------------------------------------------------
# psi
def _word_name(rs: RootSystem, v) -> str:
    word = rs.word(v)
    return "".join(f"s{i + 1}" for i in word) if word else "e"


def psi_rows(cfg: RunConfig, sol) -> list[dict]:
    rs = cfg.rs
    names = [_word_name(rs, v) for v in sol.basis]
    rows = []
    for (a, b) in sorted(sol.K):
        for name, c in zip(names, sol.K[(a, b)]):
            if c != 0:
                rows.append({"alpha": ";".join(format_rational(x) for x in rs.coroot_coords(a)),
                             "beta": ";".join(format_rational(x) for x in rs.coroot_coords(b)),
                             "basis": name, "coefficient": format_rational(c)})
    return rows


def cmd_psi(cfg: RunConfig, args) -> int:
    S = _setup(cfg)
    sol = S.solver.solve(cfg.degree, args.rule)
    rows = psi_rows(cfg, sol)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, ["alpha", "beta", "basis", "coefficient"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        _write(buf.getvalue(), cfg.output)
    else:
        doc = {"schemaVersion": SCHEMA_VERSION, "config": cfg.to_json(),
               "basis": [_word_name(cfg.rs, v) for v in sol.basis],
               "coordinates": "simple coroots", "K": rows}
        _write(dumps(doc), cfg.output)
    return EXIT_OK


# ----------------------------------------------------------------------
# eval
def _coord(s: str) -> mpq:
    s = s.strip()
    try:
        if "/" in s:
            return rational(s)
        f = Fraction(s)  # exact decimal
        return mpq(f.numerator, f.denominator)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"points: bad coordinate {s!r}") from exc


def parse_point(spec: str, rank: int) -> tuple:
    """``"t=a:b,g=c:d"`` with one coordinate per fundamental coweight."""
    parts = {}
    for item in spec.split(","):
        if "=" not in item:
            raise ConfigError(f"points: expected t=...,g=..., got {spec!r}")
        key, val = (s.strip() for s in item.split("=", 1))
        key = {"gamma": "g"}.get(key, key)
        if key not in ("t", "g"):
            raise ConfigError(f"points: unknown variable {key!r}")
        coords = tuple(_coord(x) for x in val.split(":"))
        if len(coords) != rank:
            raise ConfigError(f"points: {key} needs {rank} coordinate(s)")
        if any(c == 0 for c in coords):
            raise ConfigError("points: coordinates must be nonzero")
        parts[key] = coords
    if set(parts) != {"t", "g"}:
        raise ConfigError("points: both t and g are required")
    return parts["t"], parts["g"]


def pole_distance(co, point: Sequence, positive_side: bool = True, depth: int = 60) -> float:
    """``min |t^{alpha^vee} k_alpha^2 q_alpha^n - 1|`` over alpha > 0, 1 <= n <= depth."""
    rs = co.rs
    f = co.field
    if not positive_side:
        point = co.inv_point(point)
    best = float("inf")
    for idx, beta in enumerate(rs.positive_roots):
        val = co.char(point, rs.coroots[idx]) * f.k[rs.root_class(beta)] ** 2
        qa = f.q_alpha(rs.root_length_sq(beta))
        for n in range(1, depth + 1):
            val = val * qa
            best = min(best, float(abs(val - 1)))
    return best


def eval_rows(cfg: RunConfig, points: list, threshold: float) -> list[dict]:
    from .numeric import GaugeSingular, NearPole, NumericContext, PsiEvaluator

    S = _setup(cfg)
    ev = PsiEvaluator(S.solver, S.sol, NumericContext(dps=cfg.dps, seed=cfg.seed))
    f = ev.field
    names = [_word_name(cfg.rs, v) for v in S.sol.basis]
    rows = []
    for idx, (t, g) in enumerate(points):
        ts = ":".join(format_rational(x) for x in t)
        gs = ":".join(format_rational(x) for x in g)
        dist = min(pole_distance(S.co, t, True), pole_distance(S.co, g, False))
        near = dist < threshold
        tn = tuple(f.coerce(x) for x in t)
        gn = tuple(f.coerce(x) for x in g)
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", NearPole)
                pv = ev.evaluate(tn, gn)
                G, gerr = ev.gauge.G_with_bound(tn, gn)
            near = near or any(issubclass(w.category, NearPole) for w in caught)
            vals = [G * x for x in pv.vector]
            plus = G * ev.chi_plus(pv.vector)
            rel = pv.tail + gerr
            out = list(zip(["Phi[" + n + "]" for n in names] + ["Phi+"], vals + [plus]))
        except (GaugeSingular, BqkzError, ZeroDivisionError):
            near = True
            out = [("Phi+", None)]
            rel = None
        for qty, val in out:
            rows.append({
                "point": idx, "t": ts, "gamma": gs, "quantity": qty,
                "value": "nan" if val is None else f.ctx.nstr(val, 17, min_fixed=1, max_fixed=0),
                "tolerance": "inf" if val is None else f"{float(rel * abs(val)):.3e}",
                "near_pole": int(near),
            })
    return rows


def cmd_eval(cfg: RunConfig, args) -> int:
    if not args.points:
        raise ConfigError("points: at least one --points t=...,g=... is required")
    pts = [parse_point(p, cfg.rank) for p in args.points]
    rows = eval_rows(cfg, pts, args.pole_threshold)
    buf = io.StringIO()
    w = csv.DictWriter(buf, ["point", "t", "gamma", "quantity", "value", "tolerance", "near_pole"],
                       lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    _write(buf.getvalue(), cfg.output)
    return EXIT_OK


# ----------------------------------------------------------------------
# report
def summarize(doc: dict) -> str:
    cfg = doc.get("config", {})
    head = (f"{cfg.get('type', '?')}{cfg.get('rank', '?')}  q={cfg.get('q', '?')}  k={cfg.get('k', '?')}  "
            f"degree={cfg.get('degree', '?')}  seed={cfg.get('seed', '?')}")
    lines = [head, ""]
    width = max((len(r["identity"]) for r in doc["results"]), default=10)
    suites: dict = {}
    for r in doc["results"]:
        suites.setdefault(r["suite"], []).append(r)
        lines.append(f"  {r['status'].upper():4}  {r['suite']:20} {r['identity']:{width}}  "
                     f"n={r['samples']:<5} residual={r['maxResidual']} bound={r['bound']}")
    npass = sum(r["status"] == "pass" for r in doc["results"])
    lines += ["", (f"{npass}/{len(doc['results'])} identities pass in {len(suites)} suites; "
                  f"overall {doc['status'].upper()}")]
    if doc.get("firstFailure"):
        lines.append(f"first failing suite: {doc['firstFailure']}")
    return "\n".join(lines) + "\n"


def cmd_report(cfg: RunConfig | None, args) -> int:
    if args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise BqkzError(f"cannot read {args.input}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.input}: not a JSON report ({exc.msg})") from exc
    else:
        doc = verify_document(cfg, args.suites.split(",") if args.suites else None)
    text = summarize(doc)
    if cfg is not None and cfg.output:
        _write(text, cfg.output)
    else:
        sys.stdout.write(text)
    return EXIT_OK if doc.get("status") == "pass" else EXIT_FAIL


# ----------------------------------------------------------------------
def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file; explicit flags take precedence")
    p.add_argument("--type", help="root system type A..G (default A)")
    p.add_argument("--rank", type=str, help="rank (default 1)")
    p.add_argument("--q", help="q as a rational; needs a rational e-th root (default 1/4 when possible)")
    p.add_argument("--qbase", help="q^(1/e) as a rational in (0,1)")
    p.add_argument("--k", help="multiplicity: '3' or 'long=3,short=2' (default 3)")
    p.add_argument("--k-long", dest="k_long")
    p.add_argument("--k-short", dest="k_short")
    p.add_argument("--degree", type=str, help="truncation degree D (default 4 in rank 1, else 2)")
    p.add_argument("--seed", type=str, help="random seed (default 0)")
    p.add_argument("--samples", type=str, help="samples per randomized identity (default 5)")
    p.add_argument("--dps", type=str, help="decimal digits for numeric checks (default 30)")
    p.add_argument("--output", "-o", help="output path (default stdout)")
    p.add_argument("--verbose", "-v", action="store_true", help="log suite timings to stderr")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bqkz", description="Exact kernel for bispectral quantum KZ equations.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("verify", help="run all verification suites and write a JSON report")
    _common(p)
    p.add_argument("--suites", help="comma separated subset of suites")
    p = sub.add_parser("psi", help="solve for the coefficients K[alpha,beta] of Psi")
    _common(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--rule", choices=("smallest", "largest"), default="smallest",
                   help="which gauged equation determines each coefficient")
    p = sub.add_parser("eval", help="evaluate Phi and Phi+ at points (CSV)")
    _common(p)
    p.add_argument("--points", action="append", help="t=a:b,g=c:d (repeatable)")
    p.add_argument("--pole-threshold", type=float, default=1e-6,
                   help="flag rows whose distance to the singular set is below this")
    p = sub.add_parser("report", help="human readable summary of a verification run")
    _common(p)
    p.add_argument("--input", help="summarize an existing JSON report instead of running verify")
    p.add_argument("--suites", help="comma separated subset of suites")
    return parser


COMMANDS = {"verify": cmd_verify, "psi": cmd_psi, "eval": cmd_eval, "report": cmd_report}


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors are configuration errors
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = None if args.command == "report" and args.input else build_config(args)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"bqkz: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BqkzError as exc:
        print(f"bqkz: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


__all__ = ["RunConfig", "build_config", "main", "make_parser", "parse_point", "pole_distance",
           "read_config_file", "summarize", "verify_document"]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
