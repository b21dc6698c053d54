"""The 30 two-variable Horn-type functions: series data and metadata."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Mapping, Optional

from .errors import DomainError, UnknownFunctionError
from .symbolic import Polynomial, RationalExpr, parse, substitute


@dataclass(frozen=True)
class PochhammerFactor:
    """One factor (param)_{mu1*m1 + mu2*m2}, upstairs or downstairs."""

    param: str
    role: str  # "upper" or "lower"
    mu: tuple[int, int]

    def __post_init__(self):
        if self.role not in ("upper", "lower"):
            raise ValueError(f"bad role {self.role!r}")
        if self.mu == (0, 0):
            raise ValueError("mu must be nonzero")


@dataclass(frozen=True)
class HornDefinition:
    name: str
    params: tuple[str, ...]
    factors: tuple[PochhammerFactor, ...]
    rank: int
    extra_pde: Optional[str]
    exceptional: tuple[str, ...]
    singular_locus_text: tuple[str, ...]
    printed_signature: Optional[tuple[str, ...]] = None
    exceptional_alt: Optional[Mapping] = field(default=None, hash=False, compare=False)
    note: Optional[str] = None

    def factor(self, param: str) -> PochhammerFactor:
        for f in self.factors:
            if f.param == param:
                return f
        raise DomainError(f"{self.name} has no parameter {param!r}")

    def role(self, param: str) -> str:
        return self.factor(param).role

    @property
    def upper(self) -> tuple[str, ...]:
        return tuple(f.param for f in self.factors if f.role == "upper")

    @property
    def lower(self) -> tuple[str, ...]:
        return tuple(f.param for f in self.factors if f.role == "lower")

    def extra_relation(self) -> Optional[RationalExpr]:
        """Extra PDE as an expression in t1, t2 (standing for theta1, theta2) that annihilates H."""
        return parse(self.extra_pde) if self.extra_pde else None

    def exceptional_forms(self) -> list[RationalExpr]:
        return [parse(s) for s in self.exceptional]

    def locus(self) -> list[Polynomial]:
        return [parse(s).num for s in self.singular_locus_text]


def _load() -> dict[str, HornDefinition]:
    text = resources.files("hornreduce").joinpath("data/catalog.json").read_text()
    out = {}
    for rec in json.loads(text)["functions"]:
        defn = HornDefinition(
            name=rec["name"],
            params=tuple(rec["params"]),
            factors=tuple(PochhammerFactor(f["param"], f["role"], tuple(f["mu"])) for f in rec["factors"]),
            rank=rec["rank"],
            extra_pde=rec.get("extra_pde"),
            exceptional=tuple(rec["exceptional"]),
            singular_locus_text=tuple(rec["singular_locus"]),
            printed_signature=tuple(rec["printed_signature"]) if rec.get("printed_signature") else None,
            exceptional_alt=rec.get("exceptional_alt"),
            note=rec.get("note"),
        )
        out[defn.name] = defn
    return out


@lru_cache(maxsize=None)
def _catalog() -> dict[str, HornDefinition]:
    return _load()


def names() -> list[str]:
    return list(_catalog())


def get_definition(name: str) -> HornDefinition:
    """Look up a function by name, case-insensitively."""
    if isinstance(name, HornDefinition):
        return name
    cat = _catalog()
    for key, defn in cat.items():
        if key.lower() == str(name).lower():
            return defn
    raise UnknownFunctionError(f"unknown function {name!r}; valid names: {', '.join(cat)}")


def list_functions() -> list[tuple[str, tuple[str, ...], int]]:
    return [(d.name, d.params, d.rank) for d in _catalog().values()]


def exceptional_check(name: str, values: Mapping[str, object]) -> list[str]:
    """Return the exceptional linear forms that take integer values."""
    defn = get_definition(name)
    missing = [p for p in defn.params if p not in values]
    if missing:
        raise DomainError(f"{defn.name}: unbound parameters {', '.join(missing)}")
    bind = {p: Fraction(values[p]) for p in defn.params}
    hit = []
    for text, form in zip(defn.exceptional, defn.exceptional_forms()):
        v = substitute(form, bind).constant_value()
        if v.denominator == 1:
            hit.append(text)
    return hit


def singular_locus(name: str) -> list[Polynomial]:
    return get_definition(name).locus()
