from fractions import Fraction as F

import pytest

from hornreduce.errors import DomainError, ExceptionalParametersError
from hornreduce.reduction import plan_path, reduce, verify_reduction
from hornreduce.symbolic import parse
from hornreduce.theta import ThetaOperator

from examples_data import EXAMPLE1, EXAMPLE2, EXAMPLE3


def _check(result, expected):
    q, new = expected
    assert result.operator == ThetaOperator.of(*q)
    assert result.new_params == tuple(parse(p) for p in new)


def test_example1():
    _check(reduce("G1", (-1, -1, 0), ["a", "b1", "b2"]), EXAMPLE1)


def test_example2():
    _check(reduce("H1", (-1, 0, 0, 1)), EXAMPLE2)


def test_example3():
    _check(reduce("H1c", (0, 1, 1), ["a", "b", "c"]), EXAMPLE3)


def test_zero_shift():
    r = reduce("H7", (0, 0, 0, 0))
    assert r.operator.is_identity()
    assert r.new_params == r.params
    assert r.to_text() == "{{1,0,0,0},{a,b,c,d}}"


def test_plan_path():
    assert plan_path("G1", (-1, -1, 0)) == [("a", -1), ("b1", -1)]
    assert plan_path("G1", (0, 0, 0)) == []
    assert plan_path("Gamma2", (2, 0)) == [("b1", 1), ("b1", 1)]
    with pytest.raises(DomainError):
        plan_path("G1", (1, 0))


def test_numeric_and_expression_params():
    r = reduce("G1", (1, 0, 0), [F(1, 3), F(1, 5), F(3, 7)])
    generic = reduce("G1", (1, 0, 0))
    bind = {"a": F(1, 3), "b1": F(1, 5), "b2": F(3, 7)}
    assert r.operator == generic.operator.subs(bind)
    shifted = reduce("G1", (1, 0, 0), ["a+1", "b1", "b2"])
    assert shifted.operator == generic.operator.subs({"a": parse("a+1")})


def test_exceptional_refused():
    with pytest.raises(ExceptionalParametersError) as exc:
        reduce("G1", (1, 0, 0), [2, F(1, 3), F(1, 5)])
    assert exc.value.triggered == ["a"]


def test_json_round_trip():
    r = reduce("H1c", (0, 1, 1))
    j = r.to_json()
    assert tuple(parse(j["coefficients"][k]) for k in ("q0", "q1", "q2", "q12")) == r.coefficients
    assert tuple(parse(p) for p in j["new_params"]) == r.new_params
    assert parse(r.to_cas().split("}, {")[0][2:].split(", ")[3]) == r.q12


def test_verify_example1_point():
    r = reduce("G1", (-1, -1, 0))
    rep = verify_reduction("G1", r, {"a": F(1, 3), "b1": F(1, 5), "b2": F(3, 7)}, (F(1, 10), F(15, 100)))
    assert rep.converged and rep.status == "pass" and rep.rel_error < 1e-10


def test_verify_example3_point():
    r = reduce("H1c", (0, 1, 1))
    rep = verify_reduction("H1c", r, {"a": F(1, 3), "b": F(1, 5), "c": F(3, 7)}, (F(1, 10), F(1, 10)))
    assert rep.status == "pass" and rep.rel_error < 1e-10


def test_verify_zero_shift_exact():
    r = reduce("G2", (0, 0, 0, 0))
    rep = verify_reduction("G2", r, {"a1": F(1, 3), "a2": F(1, 5), "b1": F(1, 7), "b2": F(2, 9)}, (F(1, 20), F(1, 30)))
    assert rep.rel_error == 0 and rep.status == "pass"


def test_verify_detects_wrong_operator():
    r = reduce("G1", (-1, -1, 0))
    bad = type(r)(r.function, r.shift, r.params, r.operator + ThetaOperator.of("1/1000", 0, 0, 0), r.new_params)
    rep = verify_reduction("G1", bad, {"a": F(1, 3), "b1": F(1, 5), "b2": F(3, 7)}, (F(1, 10), F(15, 100)))
    assert rep.status == "fail"


def test_tolerance_below_budget_fails():
    r = reduce("G1", (-1, -1, 0))
    rep = verify_reduction("G1", r, {"a": F(1, 3), "b1": F(1, 5), "b2": F(3, 7)}, (F(1, 10), F(15, 100)), tol=1e-30)
    assert rep.status == "fail" and "budget" in rep.reason


def test_nonconvergent_is_inconclusive():
    r = reduce("G1", (1, 0, 0))
    rep = verify_reduction("G1", r, {"a": F(1, 3), "b1": F(1, 5), "b2": F(3, 7)}, (F(9, 10), F(8, 10)), N=15)
    assert rep.status == "inconclusive"
