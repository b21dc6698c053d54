"""Fraction-free linear solving over the field of rational functions."""

from __future__ import annotations

from typing import Sequence

from .errors import StructureError
from .symbolic import Polynomial, RationalExpr, gcd


def _clear_row(row: Sequence[RationalExpr]) -> list[Polynomial]:
    """Scale a row of fractions to polynomials by the lcm of its denominators."""
    L = Polynomial.const(1)
    for c in row:
        if not c.is_zero():
            L = L * c.den.exact_div(gcd(L, c.den))
    return [c.num * L.exact_div(c.den) if not c.is_zero() else c.num for c in row]


def solve(A: Sequence[Sequence[RationalExpr]], b: Sequence[RationalExpr]) -> list[RationalExpr]:
    """Solve A x = b by Bareiss elimination and exact back substitution."""
    n = len(A)
    M = [_clear_row(list(A[i]) + [b[i]]) for i in range(n)]
    prev = Polynomial.const(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if not M[i][k].is_zero()), None)
        if piv is None:
            raise StructureError("singular linear system")
        M[k], M[piv] = M[piv], M[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]).exact_div(prev)
            M[i][k] = Polynomial.const(0)
        prev = M[k][k]
    x = [None] * n
    for i in reversed(range(n)):
        acc = RationalExpr(M[i][n], 1)
        for j in range(i + 1, n):
            if not M[i][j].is_zero():
                acc = acc - RationalExpr(M[i][j], 1) * x[j]
        x[i] = acc / RationalExpr(M[i][i], 1)
    return x
