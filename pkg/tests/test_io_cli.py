import json
import subprocess
import sys

import pytest

from torface import cli, fixtures
from torface.errors import ParseError, ValidationError
from torface.io import load, parse_input, read_json


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_input_fixtures():
    cx, mc = parse_input(fixtures.path("fx1"))
    assert len(cx) == 2
    cx3, mc3 = parse_input(fixtures.path("fx3"))
    assert len(cx3) == 19 and mc3.is_cone_wise_normal()


def test_missing_empty_cell():
    with pytest.raises(ValidationError) as e:
        load(fixtures.path("broken"))
    assert e.value.rule == "MissingEmptyCell"


def test_parse_error_has_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "cells": [\n    {"id": "x",\n  ]\n}\n')
    with pytest.raises(ParseError) as e:
        read_json(p)
    assert e.value.line is not None and e.value.line >= 3


def test_validate_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", "fx3")
    assert code == 0 and json.loads(out)["valid"]
    code, out, err = run(capsys, "validate", str(fixtures.path("broken")))
    assert code == 4
    assert json.loads(out)["rule"] == "MissingEmptyCell"
    p = tmp_path / "bad.json"
    p.write_text("{")
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 4 and json.loads(out)["error"] == "ParseError"


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["nonsense"])
    assert e.value.code == 1
    code, _, _ = run(capsys, "validate", "/no/such/file.json")
    assert code == 1
    code, _, _ = run(capsys, "degreeset", "fx2", "--cell", "nope")
    assert code == 1


def test_check_cm(capsys):
    code, out, _ = run(capsys, "check", "cm", "fx1", "--box", "6", "--jobs", "1")
    assert code == 0 and json.loads(out)["verdict"] == "ConsistentWithCM"
    code, out, _ = run(capsys, "check", "cm", "fx6", "--box", "4", "--jobs", "1")
    rep = json.loads(out)
    assert code == 2 and rep["verdict"] == "NotCM"
    assert {"index": 1, "degree": {"cell": "empty", "coords": []}} in rep["witnesses"]


def test_check_duality_and_ishida(capsys):
    code, out, _ = run(capsys, "check", "duality", "fx2", "--box", "3", "--jobs", "1")
    assert code == 0 and json.loads(out)["status"] == "pass"
    code, out, _ = run(capsys, "check", "ishida", "fx1", "--box", "3", "--jobs", "1")
    assert code == 2 and json.loads(out)["status"] == "refused"
    code, out, _ = run(capsys, "check", "ishida", "fx1", "--normalize", "--box", "3", "--jobs", "1")
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_presentation_command(capsys):
    code, out, err = run(capsys, "presentation", "fx1")
    rep = json.loads(out)
    assert code == 0 and rep["relations"] == ["t2^3 - t3^2"]


def test_cohomology_csv_and_out(capsys, tmp_path):
    dest = tmp_path / "t.csv"
    code, out, _ = run(capsys, "cohomology", "fx1", "--complex", "J", "--box", "2", "--format", "csv",
                       "--jobs", "1", "--out", str(dest))
    assert code == 0 and out == ""
    lines = dest.read_text().splitlines()
    assert lines[0] == "complex,index,cell,coords,rank"
    assert "J,-1,v,-1,1" in lines


def test_degreeset(capsys):
    code, out, _ = run(capsys, "degreeset", "fx2", "--cell", "u", "--box", "2")
    rep = json.loads(out)
    assert code == 0
    assert {"cell": "v", "coords": [1]} not in rep["localization"]
    assert {"cell": "u", "coords": [-2]} in rep["localization"]
    assert rep["semigroup"] == [{"cell": "empty", "coords": []}, {"cell": "u", "coords": [1]},
                                {"cell": "u", "coords": [2]}]


def test_sqcheck(capsys, tmp_path):
    code, out, _ = run(capsys, "sqcheck", "fx3", "--module", "quotient:sq1", "--box", "2")
    assert code == 0 and json.loads(out)["squarefree"]
    p = tmp_path / "m.json"
    p.write_text(json.dumps({"dims": [{"degree": {"cell": "v", "coords": [2]}, "dim": 1}]}))
    code, out, _ = run(capsys, "sqcheck", "fx1", "--module", str(p), "--box", "6")
    rep = json.loads(out)
    assert code == 2 and not rep["squarefree"] and rep["witness"]["a"] == {"cell": "v", "coords": [2]}


def test_oracle_diff_command(capsys):
    code, out, _ = run(capsys, "oracle-diff", "fx2", "--box", "2")
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_output_is_deterministic(capsys):
    outs = set()
    for jobs in ("1", "2"):
        code, out, _ = run(capsys, "cohomology", "fx5", "--complex", "L", "--box", "2", "--jobs", jobs)
        assert code == 0
        outs.add(out)
    assert len(outs) == 1


def test_prime_field_flag(capsys):
    code, out, _ = run(capsys, "cohomology", "fx1", "--complex", "L", "--box", "3", "--field", "fp:32003", "--jobs", "1")
    assert code == 0 and json.loads(out)["field"] == "fp:32003"
    code, _, _ = run(capsys, "cohomology", "fx1", "--complex", "L", "--field", "gf", "--jobs", "1")
    assert code == 1


def test_logs_go_to_stderr():
    proc = subprocess.run([sys.executable, "-m", "torface", "validate", str(fixtures.path("broken"))],
                          capture_output=True, text=True)
    assert proc.returncode == 4
    assert "MissingEmptyCell" in proc.stderr
    assert json.loads(proc.stdout)["valid"] is False
