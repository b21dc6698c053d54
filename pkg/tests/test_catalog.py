from fractions import Fraction as F

import pytest

from hornreduce.catalog import exceptional_check, get_definition, list_functions, names, singular_locus
from hornreduce.errors import DomainError, UnknownFunctionError
from hornreduce.symbolic import parse

RANK3 = {"G1", "G2", "G3", "H3", "H6", "Phi1", "Phi2", "Phi3", "Gamma1", "Gamma2", "H6c", "H8c"}


def factors(name):
    return {(f.param, f.role, f.mu) for f in get_definition(name).factors}


def test_g2_factors():
    d = get_definition("G2")
    assert factors("G2") == {("a1", "upper", (1, 0)), ("a2", "upper", (0, 1)),
                             ("b1", "upper", (-1, 1)), ("b2", "upper", (1, -1))}
    assert d.rank == 3


def test_h3_factors():
    assert factors("H3") == {("a", "upper", (2, 1)), ("b", "upper", (0, 1)), ("c", "lower", (1, 1))}
    assert get_definition("H3").rank == 3


def test_unknown_function_lists_names():
    with pytest.raises(UnknownFunctionError) as exc:
        get_definition("X99")
    assert "G1" in str(exc.value)


def test_lookup_is_case_insensitive():
    assert get_definition("phi1").name == "Phi1"


def test_thirty_functions():
    rows = list_functions()
    assert len(rows) == 30 == len(set(names()))
    psi1 = next(r for r in rows if r[0] == "Psi1")
    assert psi1 == ("Psi1", ("a", "b", "c1", "c2"), 4)
    assert {n for n, _, r in rows if r == 3} == RANK3


def test_every_rank3_function_has_an_extra_relation():
    for name in names():
        d = get_definition(name)
        assert (d.extra_relation() is not None) == (d.rank == 3)


def test_exceptional_check():
    assert exceptional_check("G1", {"a": 2, "b1": F(1, 3), "b2": F(1, 5)}) == ["a"]
    assert exceptional_check("G1", {"a": F(1, 3), "b1": F(1, 5), "b2": F(1, 7)}) == []
    assert exceptional_check("H5c", {"a": 1, "b": 2}) == []
    with pytest.raises(DomainError):
        exceptional_check("G1", {"a": 1})


def test_singular_locus():
    assert set(singular_locus("G1")) == {parse("1+z1+z2").num, parse("4*z1*z2-1").num}
    assert singular_locus("Phi3") == []
    assert singular_locus("G3") == [parse("-1-4*z1-4*z2-18*z1*z2+27*z1^2*z2^2").num]


def test_h4c_carries_note():
    d = get_definition("H4c")
    assert d.note and d.exceptional_alt
