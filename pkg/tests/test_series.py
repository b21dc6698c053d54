from fractions import Fraction as F

import mpmath
import pytest

from hornreduce.catalog import names
from hornreduce.errors import EvaluationError
from hornreduce.series import EvalPoint, coefficient_lattice, eval_series, pochhammer_int, sample_points

from oracles import finite_difference_thetas, loggamma_coefficient, loggamma_sum

G2 = {"a1": F(1, 3), "a2": F(1, 5), "b1": F(1, 7), "b2": F(2, 9)}


def test_pochhammer():
    assert pochhammer_int(F(3, 7), 0) == 1
    assert pochhammer_int(F(1, 2), 3) == F(15, 8)
    assert pochhammer_int(F(1, 2), -2) == F(4, 3)
    with pytest.raises(EvaluationError):
        pochhammer_int(F(2), -2)
    with mpmath.workdps(50):
        x = mpmath.mpf("0.3")
        assert abs(pochhammer_int(x, -3) - mpmath.gamma(x - 3) / mpmath.gamma(x)) < 1e-40


def test_origin():
    r = eval_series("Phi3", EvalPoint({"b": F(1, 3), "c": F(2, 7)}, (0, 0)), N=10)
    assert r.value == 1 and r.theta1 == 0 and r.theta2 == 0 and r.theta12 == 0
    for name in names():
        pt = sample_points(name, 1)[0]
        assert eval_series(name, EvalPoint(pt.params, (0, 0)), N=5).value == 1


def test_g2_matches_loggamma_sum():
    z = (F(5, 100), F(7, 100))
    value = eval_series("G2", EvalPoint(G2, z), 40).value
    assert abs(value - loggamma_sum("G2", G2, z, 40)) < 1e-12 * abs(value)


def test_lattice_matches_loggamma_spot():
    C = coefficient_lattice("G2", G2, 6)
    for m in [(0, 0), (2, 3), (6, 1), (5, 6)]:
        want = loggamma_coefficient("G2", G2, *m)
        assert abs(C[m[0]][m[1]] - want) < 1e-12 * abs(want)


def test_thetas_match_finite_differences():
    pt = sample_points("H1", 1, seed=2)[0]
    rep = eval_series("H1", pt)
    e = []
    for h in ("1e-4", "5e-5"):
        fd = finite_difference_thetas("H1", pt.params, pt.z, h)
        e.append([abs(a - b) for a, b in zip(fd, (rep.theta1, rep.theta2, rep.theta12))])
    for big, small in zip(*e):
        assert 3.5 < big / small < 4.5


def test_non_convergent_is_flagged():
    pt = EvalPoint({"a": F(1, 3), "b1": F(1, 5), "b2": F(1, 7)}, (F(9, 10), F(9, 10)))
    assert not eval_series("G1", pt, N=20).converged


def test_sampling_respects_locus():
    pts = sample_points("G1", 20, seed=4)
    for pt in pts:
        z1, z2 = pt.z
        assert abs(1 + z1 + z2) > F(1, 2) and abs(4 * z1 * z2 - 1) > F(1, 2)
        assert all(F(1, 50) <= abs(v) <= F(1, 10) for v in pt.z)


def test_sampling_is_deterministic():
    a = sample_points("Phi3", 5, seed=7)
    b = sample_points("Phi3", 5, seed=7)
    assert a == b
    assert len({(tuple(sorted(p.params.items())), p.z) for p in a}) == 5
    assert sample_points("Phi3", 5, seed=8) != a


def test_fixed_params_sampling():
    pts = sample_points("G1", 3, params={"a": F(1, 3), "b1": F(1, 5), "b2": F(3, 7)})
    assert all(p.params["a"] == F(1, 3) for p in pts)


def test_report_dict():
    d = eval_series("G2", EvalPoint(G2, (F(1, 20), F(1, 30))), 30).as_dict()
    assert set(d) == {"value", "theta1", "theta2", "theta12", "tail_bound", "converged"}
