import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from hornreduce.cli import main
from hornreduce.symbolic import parse
from hornreduce.theta import ThetaOperator

from examples_data import EXAMPLE1, EXAMPLE2, EXAMPLE3

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def norm(s):
    return re.sub(r"\s+", "", s)


def split_text(out):
    """Parse '{{q0,q1,q2,q12},{p1,...}}' back into expressions."""
    body = norm(out)[2:-2]
    q, p = body.split("},{")
    return [parse(x) for x in q.split(",")], [parse(x) for x in p.split(",")]


CASES = [
    ("example1.txt", ["reduce", "G1", "--shift", "-1,-1,0", "--params", "a,b1,b2"], EXAMPLE1),
    ("example2.txt", ["reduce", "H1", "--shift", "-1,0,0,1", "--params", "a,b,c,d"], EXAMPLE2),
    ("example3.txt", ["reduce", "H1c", "--shift", "0,1,1", "--params", "a,b,c"], EXAMPLE3),
]


@pytest.mark.parametrize("golden,argv,expected", CASES)
def test_reduce_text_matches_golden(capsys, golden, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert norm(out) == norm((GOLDEN / golden).read_text())
    q, p = split_text(out)
    assert ThetaOperator.of(*q) == ThetaOperator.of(*expected[0])
    assert p == [parse(x) for x in expected[1]]


def test_reduce_json(capsys):
    code, out, _ = run(capsys, "reduce", "H1c", "--shift", "0,1,1", "--params", "a,b,c", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data == json.loads((GOLDEN / "example3.json").read_text())
    q = [parse(data["coefficients"][k]) for k in ("q0", "q1", "q2", "q12")]
    assert ThetaOperator.of(*q) == ThetaOperator.of(*EXAMPLE3[0])


def test_reduce_cas(capsys):
    code, out, _ = run(capsys, "reduce", "G1", "--shift", "-1,-1,0", "--format", "cas")
    assert code == 0
    q, p = split_text(out)
    assert ThetaOperator.of(*q) == ThetaOperator.of(*EXAMPLE1[0])


def test_zero_shift(capsys):
    code, out, _ = run(capsys, "reduce", "G1", "--shift", "0,0,0", "--params", "a,b1,b2")
    assert code == 0 and out.strip() == "{{1,0,0,0},{a,b1,b2}}"


def test_exit_codes(capsys):
    assert run(capsys, "reduce", "G1", "--shift", "1,0")[0] == 2
    assert run(capsys, "reduce", "G1", "--shift", "x,0,0")[0] == 2
    assert run(capsys, "reduce", "G1", "--shift", "1,0,0", "--params", "a,b1,(")[0] == 2
    assert run(capsys, "reduce", "G1")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    code, _, err = run(capsys, "reduce", "G1", "--shift", "1,0,0", "--params", "2,1/3,1/5")
    assert code == 3 and "a" in err
    code, _, err = run(capsys, "reduce", "X99", "--shift", "1")
    assert code == 4 and "G1" in err
    assert run(capsys, "describe", "X99")[0] == 4


def test_verify_defaults(capsys):
    code, out, _ = run(capsys, "verify", "G1", "--shift", "-1,-1,0")
    assert code == 0
    errs = [float(x) for x in re.findall(r"rel_err (\S+)", out)]
    assert len(errs) == 3 and max(errs) < 1e-10


def test_verify_tight_tolerance_fails(capsys):
    assert run(capsys, "verify", "G1", "--shift", "-1,-1,0", "--tol", "1e-30")[0] == 5


def test_verify_zero_shift(capsys):
    code, out, _ = run(capsys, "verify", "H3", "--shift", "0,0,0", "--format", "json")
    assert code == 0
    assert all(float(p["rel_error"]) == 0 for p in json.loads(out)["points"])


def test_verify_fixed_point(capsys):
    code, out, _ = run(capsys, "verify", "H1c", "--shift", "0,1,1", "--params", "1/3,1/5,3/7", "--z", "0.1,0.1")
    assert code == 0 and "1 pass" in out


def test_verify_inconclusive_is_not_fatal(capsys):
    code, out, _ = run(capsys, "verify", "G1", "--shift", "1,0,0", "--params", "1/3,1/5,3/7", "--z", "0.9,0.8", "--N", "15")
    assert code == 0 and "1 inconclusive" in out


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and len(out.strip().splitlines()) == 30
    code, out, _ = run(capsys, "list", "--format", "json")
    assert len(json.loads(out)) == 30


def test_describe_gamma2(capsys):
    code, out, _ = run(capsys, "describe", "Gamma2")
    assert code == 0
    assert "theta1*theta2 = {z1*z2,0,0,0}" in out
    assert "extra PDE" in out and "t1*t2 - z1*z2 = 0" in out


def test_describe_h4c_note(capsys):
    code, out, _ = run(capsys, "describe", "H4c")
    assert code == 0 and "note:" in out and "(a, c, d)" in out


def test_describe_json(capsys):
    code, out, _ = run(capsys, "describe", "Phi1", "--format", "json")
    data = json.loads(out)
    assert ThetaOperator.of(*data["rewrite_rules"]["theta1*theta2"]) == ThetaOperator.of(0, "z2/z1", "-b", 0)


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "G2", "--params", "1/3,1/5,1/7,2/9", "--z", "0.05,0.07", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["converged"] is True
    assert run(capsys, "eval", "G2", "--params", "a1,a2,b1,b2", "--z", "0.05,0.07")[0] == 2


def test_catalog_dump(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0 and len(json.loads(out)["functions"]) == 30


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "hornreduce.cli", "reduce", "G1", "--shift", "0,0,0"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "{{1,0,0,0},{a,b1,b2}}"
