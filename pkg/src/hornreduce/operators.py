"""Step operators, inverse operators and the tabulated inverse fixtures."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Mapping, Optional

from . import linalg
from .annihilator import ThetaSystem, generic_system
from .catalog import get_definition
from .errors import DomainError, StructureError
from .symbolic import ONE, ZERO, RationalExpr, parse, substitute, swap
from .theta import ThetaOperator

_WORDS = ((), (1,), (2,), (1, 2))


def _sym(name: str) -> RationalExpr:
    return RationalExpr.var(name)


def step_up_upper(defn, param: str) -> ThetaOperator:
    """(mu1*theta1 + mu2*theta2 + g)/g, mapping H(g) to H(g+1)."""
    defn = get_definition(defn)
    f = defn.factor(param)
    if f.role != "upper":
        raise DomainError(f"{defn.name}: {param} is not an upper parameter")
    g = _sym(param)
    return ThetaOperator(ONE, RationalExpr.from_value(f.mu[0]) / g, RationalExpr.from_value(f.mu[1]) / g, ZERO)


def step_down_lower(defn, param: str) -> ThetaOperator:
    """(nu1*theta1 + nu2*theta2 + s - 1)/(s - 1), mapping H(s) to H(s-1)."""
    defn = get_definition(defn)
    f = defn.factor(param)
    if f.role != "lower":
        raise DomainError(f"{defn.name}: {param} is not a lower parameter")
    s1 = _sym(param) - 1
    return ThetaOperator(ONE, RationalExpr.from_value(f.mu[0]) / s1, RationalExpr.from_value(f.mu[1]) / s1, ZERO)


def direct_step(defn, param: str) -> ThetaOperator:
    defn = get_definition(defn)
    if defn.role(param) == "upper":
        return step_up_upper(defn, param)
    return step_down_lower(defn, param)


def _binding_key(bindings: Optional[Mapping]) -> tuple:
    if not bindings:
        return ()
    return tuple(sorted((k, str(RationalExpr.from_value(v))) for k, v in bindings.items()))


@lru_cache(maxsize=4096)
def _system_cached(name: str, key: tuple) -> ThetaSystem:
    base = generic_system(name)
    if not key:
        return base
    return base.substitute({k: parse(v) for k, v in key})


def system_at(defn, bindings: Optional[Mapping] = None) -> ThetaSystem:
    """Rewrite system with parameters replaced by ``bindings``."""
    defn = get_definition(defn)
    return _system_cached(defn.name, _binding_key(bindings))


def compose(defn, outer: ThetaOperator, inner: ThetaOperator, bindings: Optional[Mapping] = None) -> ThetaOperator:
    """Operator product outer*inner in the context of the function inner acts on."""
    return system_at(defn, bindings).compose(outer, inner)


def invert_operator(system: ThetaSystem, step: ThetaOperator) -> ThetaOperator:
    """Solve T*step = 1 modulo the annihilating ideal of ``system``."""
    n = system.rank
    images = [system.apply_word(w, step).vector(n) for w in _WORDS[:n]]
    A = [[images[k][l] for k in range(n)] for l in range(n)]
    b = [ONE] + [ZERO] * (n - 1)
    try:
        t = linalg.solve(A, b)
    except StructureError as exc:
        raise StructureError(f"{system.name}: inverse operator system is singular") from exc
    return ThetaOperator.from_vector(t)


@lru_cache(maxsize=None)
def _generic_inverse(name: str, param: str) -> ThetaOperator:
    return invert_operator(generic_system(name), direct_step(name, param))


def invert(defn, param: str, bindings: Optional[Mapping] = None) -> ThetaOperator:
    """Inverse of the direct step in ``param``.

    Upper parameter g: H(g) = T H(g+1). Lower parameter s: H(s) = T H(s-1).
    T is expressed at the parameters of the left-hand side.
    """
    defn = get_definition(defn)
    defn.factor(param)
    T = _generic_inverse(defn.name, param)
    return T.subs(bindings) if bindings else T


# ---------------------------------------------------------------------------
# tabulated inverse operators


@dataclass(frozen=True)
class InverseFixture:
    function: str
    param: str
    role: str
    direction: int
    entries: tuple  # four items: expression text or symmetry reference dict
    section: Optional[str] = None
    erratum: Optional[dict] = None


@lru_cache(maxsize=None)
def _fixtures() -> list[InverseFixture]:
    text = resources.files("hornreduce").joinpath("data/inverse_fixtures.json").read_text()
    out = []
    for rec in json.loads(text)["fixtures"]:
        fx = InverseFixture(
            function=rec["function"],
            param=rec["param"],
            role=rec["role"],
            direction=rec["direction"],
            entries=tuple(json.dumps(rec[k]) if isinstance(rec[k], dict) else rec[k] for k in "ABCD"),
            section=rec.get("section"),
            erratum=rec.get("erratum"),
        )
        out.append(fx)
    return out


def fixture_records() -> list[InverseFixture]:
    """All tabulated records, including one block printed twice."""
    return list(_fixtures())


@lru_cache(maxsize=None)
def _fixture_index() -> dict[tuple[str, str], InverseFixture]:
    return {(fx.function, fx.param): fx for fx in _fixtures()}


def _expand(entry: str, corrected: bool) -> RationalExpr:
    if not entry.startswith("{"):
        return parse(entry)
    ref = json.loads(entry)
    base = appendix_fixture(ref["function"], ref["param"], corrected=corrected)
    coeff = base.coeffs["ABCD".index(ref["ref"])]
    return swap(coeff, [tuple(p) for p in ref["swap"]])


def fixture_operator(fx: InverseFixture, corrected: bool = True) -> ThetaOperator:
    """Expand one tabulated record; with ``corrected`` its erratum (if any) replaces the printed entry."""
    entries = fx.entries
    if corrected and fx.erratum:
        entries = tuple(
            json.dumps(fx.erratum[k]) if isinstance(fx.erratum.get(k), dict) else fx.erratum.get(k, e)
            for k, e in zip("ABCD", entries)
        )
    return ThetaOperator(*(_expand(e, corrected) for e in entries))


def appendix_fixture(function: str, param: str, corrected: bool = True) -> ThetaOperator:
    """Tabulated inverse operator with symmetry references expanded."""
    defn = get_definition(function)
    key = (defn.name, param)
    if key not in _fixture_index():
        raise KeyError(f"no tabulated inverse for {defn.name}, {param}")
    return fixture_operator(_fixture_index()[key], corrected)
