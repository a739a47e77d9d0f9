import json
import subprocess
import sys

import numpy as np
import pytest

from loopfact.cli import (RunConfig, config_from_args, main, parse_complex_list, parse_poly_text)
from loopfact.errors import ParseError
from loopfact.report import SUITES, Record, Report, dumps


def _lines(text):
    return [json.loads(line) for line in text.strip().splitlines()]


def test_parsers():
    assert parse_complex_list("1, 0.5+0.2j, -1j") == [1, 0.5 + 0.2j, -1j]
    assert parse_complex_list("") == []
    assert parse_poly_text("1:0.4, -1:0.2j").to_dict() == {1: 0.4, -1: 0.2j}
    with pytest.raises(ParseError) as err:
        parse_complex_list("1, abc", "zeta")
    assert "zeta[1]" in str(err.value)
    with pytest.raises(ParseError):
        parse_poly_text("0.4")


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("nope")
    with pytest.raises(ValueError):
        RunConfig("verify", tol=0.0)


def test_env_override(monkeypatch):
    monkeypatch.setenv("LOOPFACT_SEED", "7")
    monkeypatch.setenv("LOOPFACT_SUITE", "weyl,coordinates")
    cfg = config_from_args(["verify"])
    assert cfg.seed == 7 and cfg.suites == ("weyl", "coordinates")
    assert config_from_args(["verify", "--seed", "3"]).seed == 3
    monkeypatch.setenv("LOOPFACT_SEED", "x")
    assert main(["verify"]) == 2


def test_verify_all_pass(capsys):
    assert main(["verify"]) == 0
    recs = _lines(capsys.readouterr().out)
    assert recs[-1]["summary"] and recs[-1]["failed"] == []
    body = recs[:-1]
    assert {r["name"].split("/")[0] for r in body} >= {"coordinates", "weyl", "iwasawa"}
    for r in body:
        assert set(r) == {"name", "anchor", "inputs", "expected", "actual", "tolerance", "pass"}


def test_verify_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(["verify", "--seed", "5", "--out", str(a)]) == 0
    assert main(["verify", "--seed", "5", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_failing_record_sets_exit_code(capsys):
    assert main(["factor", "--zeta", "0.3+0.2j, 0.7, -0.4j", "--tol", "1e-40"]) == 1
    assert _lines(capsys.readouterr().out)[-1]["failed"]


def test_factor_command(tmp_path, capsys):
    csv = tmp_path / "b.csv"
    assert main(["factor", "--zeta", "1", "--csv", str(csv)]) == 0
    recs = {r["name"]: r for r in _lines(capsys.readouterr().out)[:-1]}
    assert recs["factor/a2"]["actual"] == pytest.approx(2.0)
    assert csv.read_text().strip()
    assert main(["factor", "--eta", "0, 0.4", "--chi", "1:0.2", "--zeta", "0.3, 0.1"]) == 0


def test_factor_from_document(tmp_path, capsys):
    doc = tmp_path / "in.json"
    doc.write_text(json.dumps({"x": [[0.2, 0.1], 0.5]}))
    assert main(["factor", "--in", str(doc)]) == 0
    bad = tmp_path / "bad.json"
    bad.write_text('{"zeta": [1, "two"]}')
    assert main(["factor", "--in", str(bad)]) == 2
    assert "zeta[1]" in capsys.readouterr().err
    broken = tmp_path / "broken.json"
    broken.write_text('{"zeta": [1,')
    assert main(["factor", "--in", str(broken)]) == 2


def test_integrate_and_iwasawa_and_weyl(capsys):
    assert main(["integrate", "--q", "3", "--method", "quad"]) == 0
    assert main(["integrate", "--q", "2, 1", "--samples", "20000", "--seed", "1"]) == 0
    assert main(["integrate", "--q", "1.5, 0"]) == 2
    assert main(["iwasawa", "--f", "1:0.4"]) == 0
    assert main(["iwasawa", "--f", "1:1.5"]) == 2
    capsys.readouterr()
    assert main(["weyl", "--word", "s1 s0"]) == 0
    recs = {r["name"]: r for r in _lines(capsys.readouterr().out)[:-1]}
    assert recs["weyl/haar"]["actual"] == [0, 2]
    assert main(["weyl", "--word", "s0 s0"]) == 2


def test_dumps_is_stable():
    assert dumps({"a": 0.1, "b": [1, 2.0, None, True]}) == dumps({"a": 0.1, "b": [1, 2.0, None, True]})
    assert json.loads(dumps(0.1)) == 0.1
    rep = Report()
    rep.extend([Record("x", "y", {}, 1.0, 1.0, 0.0, True)])
    assert rep.ok and rep.summary()["total"] == 1


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "loopfact", "weyl", "--word", "s0"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout.splitlines()[-1])["summary"]
