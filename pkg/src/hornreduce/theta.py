"""Operators over the basis {1, theta1, theta2, theta1*theta2}."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .symbolic import ONE, ZERO, RationalExpr, parse, substitute, to_cas, to_text

BASIS_NAMES = ("1", "theta1", "theta2", "theta1*theta2")


def _rat(x) -> RationalExpr:
    if isinstance(x, RationalExpr):
        return x
    if isinstance(x, str):
        return parse(x)
    return RationalExpr.from_value(x)


@dataclass(frozen=True)
class ThetaOperator:
    """c0 + c1*theta1 + c2*theta2 + c12*theta1*theta2, coefficients on the left."""

    c0: RationalExpr
    c1: RationalExpr
    c2: RationalExpr
    c12: RationalExpr

    @classmethod
    def of(cls, *coeffs) -> "ThetaOperator":
        if len(coeffs) == 1 and not isinstance(coeffs[0], (str, int, RationalExpr)):
            coeffs = tuple(coeffs[0])
        if len(coeffs) == 3:
            coeffs = (*coeffs, 0)
        if len(coeffs) != 4:
            raise ValueError("need 3 or 4 coefficients")
        return cls(*(_rat(c) for c in coeffs))

    @classmethod
    def identity(cls) -> "ThetaOperator":
        return cls(ONE, ZERO, ZERO, ZERO)

    @classmethod
    def zero(cls) -> "ThetaOperator":
        return cls(ZERO, ZERO, ZERO, ZERO)

    @classmethod
    def basis(cls, k: int) -> "ThetaOperator":
        c = [ZERO] * 4
        c[k] = ONE
        return cls(*c)

    @property
    def coeffs(self) -> tuple[RationalExpr, RationalExpr, RationalExpr, RationalExpr]:
        return (self.c0, self.c1, self.c2, self.c12)

    def vector(self, rank: int) -> list[RationalExpr]:
        if rank == 3 and not self.c12.is_zero():
            raise ValueError("theta1*theta2 component is not reduced in a rank-3 context")
        return list(self.coeffs[:rank])

    @classmethod
    def from_vector(cls, v: Iterable[RationalExpr]) -> "ThetaOperator":
        v = list(v)
        return cls.of(*v) if len(v) == 4 else cls.of(*v, ZERO)

    def __add__(self, other: "ThetaOperator") -> "ThetaOperator":
        return ThetaOperator(*(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ThetaOperator") -> "ThetaOperator":
        return ThetaOperator(*(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def scale(self, f) -> "ThetaOperator":
        """Left multiplication by a function f."""
        f = _rat(f)
        return ThetaOperator(*(f * x for x in self.coeffs))

    def subs(self, bindings: Mapping) -> "ThetaOperator":
        return ThetaOperator(*(substitute(x, bindings) for x in self.coeffs))

    def is_identity(self) -> bool:
        return self == ThetaOperator.identity()

    def to_text(self) -> str:
        return "{" + ",".join(to_text(c) for c in self.coeffs) + "}"

    def to_cas(self) -> str:
        return "{" + ", ".join(to_cas(c) for c in self.coeffs) + "}"

    def __str__(self):
        return self.to_text()
