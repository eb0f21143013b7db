"""The bqkz command line: exit codes, configuration and output formats."""

import csv
import io
import json

import jsonschema
import pytest

from bqkz.cli import main, parse_point
from bqkz.report import schema
from bqkz.scalars import ConfigError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_a1_passes_and_validates(capsys):
    code, out, _ = run(capsys, "verify", "--type", "A", "--rank", "1")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema())
    assert doc["status"] == "pass"
    assert {r["suite"].split(".")[0] for r in doc["results"]} >= {"hecke", "cocycle", "solver", "macdonald"}


def test_verify_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(capsys, "verify", "--type", "A", "--rank", "2", "--suites", "hecke,cocycle", "-o", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv,msg", [
    (["--q", "0"], "qbase must lie in (0,1)"),
    (["--q", "2"], "qbase must lie in (0,1)"),
    (["--type", "H", "--rank", "3"], ""),
    (["--degree", "-1"], "degree"),
    (["--k", "0"], "nonzero"),
])
def test_configuration_errors(capsys, argv, msg):
    code, _, err = run(capsys, "psi", *argv)
    assert code == 2
    assert msg in err


def test_unknown_subcommand(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# A2 at low degree\ntype = A\nrank = 2\ndegree = 1\n")
    code, out, _ = run(capsys, "psi", "--config", str(cfg), "--degree", "0")
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["rank"] == 2 and doc["config"]["degree"] == 0
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert run(capsys, "psi", "--config", str(bad))[0] == 2


def test_psi_formats_agree(capsys):
    code, out, _ = run(capsys, "psi", "--degree", "2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0] == {"alpha": "0", "beta": "0", "basis": "s1", "coefficient": "1"}
    assert {"alpha": "0", "beta": "1", "basis": "s1", "coefficient": "8/3"} in rows
    code, out, _ = run(capsys, "psi", "--degree", "2")
    assert json.loads(out)["K"] == rows


def test_eval_flags_poles(capsys):
    code, out, _ = run(capsys, "eval", "--points", "t=2/3,g=1/3", "--points", "t=1000,g=1/997")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    flags = {r["point"]: r["near_pole"] for r in rows}
    assert flags == {"0": "1", "1": "0"}
    assert all(r["value"] != "nan" for r in rows if r["point"] == "1")


def test_parse_point():
    assert parse_point("t=1/2:3,gamma=0.25:-2", 2) == ((0.5, 3), (0.25, -2))
    for bad in ("t=1,g=2:3", "t=0:1,g=1:1", "t=1:1", "x=1:1,g=1:1"):
        with pytest.raises(ConfigError):
            parse_point(bad, 2)


def test_report_roundtrip(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert run(capsys, "verify", "--suites", "rootdata,affweyl", "-o", str(path))[0] == 0
    code, out, _ = run(capsys, "report", "--input", str(path))
    assert code == 0
    assert "overall PASS" in out
