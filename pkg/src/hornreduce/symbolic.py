"""Exact multivariate polynomials and rational functions over Q.

Arithmetic is delegated to FLINT (``python-flint``). Every value lives in a
single growing variable context with a graded lexicographic monomial order,
so equal values always have identical representations.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

import flint

from .errors import DomainError, EvaluationError, ParseError

# Catalog parameters in first-appearance order, then the two variables, then
# auxiliary indeterminates for summation indices and theta symbols.
PARAM_ORDER = ("a", "b1", "b2", "a1", "a2", "b", "c", "d", "e", "c1", "c2")
VARIABLES = ("z1", "z2")
AUXILIARY = ("m1", "m2", "t1", "t2")

_names: tuple[str, ...] = PARAM_ORDER + VARIABLES + AUXILIARY
_ctx = flint.fmpq_mpoly_ctx.get(_names, "deglex")


def _ordered(names: Iterable[str]) -> tuple[str, ...]:
    known = set(PARAM_ORDER) | set(VARIABLES) | set(AUXILIARY)
    extra = sorted(set(names) - known)
    return PARAM_ORDER + tuple(extra) + VARIABLES + AUXILIARY


def _ensure(names: Iterable[str]) -> None:
    """Grow the global context so that it contains ``names``."""
    global _names, _ctx
    missing = [n for n in names if n not in _names]
    if not missing:
        return
    _names = _ordered(set(_names) | set(missing))
    _ctx = flint.fmpq_mpoly_ctx.get(_names, "deglex")


def _lift(p: flint.fmpq_mpoly) -> flint.fmpq_mpoly:
    if p.context() is _ctx:
        return p
    return p.project_to_context(_ctx)


def _q(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    if isinstance(x, int):
        return flint.fmpq(x)
    raise TypeError(f"not an exact rational: {x!r}")


def _frac(x: flint.fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


class Polynomial:
    """Sparse polynomial with rational coefficients in named indeterminates."""

    __slots__ = ("_p",)

    def __init__(self, raw: flint.fmpq_mpoly):
        self._p = raw

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls(_ctx.constant(_q(c)))

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        _ensure([name])
        return cls(_ctx.gen(_names.index(name)))

    @property
    def raw(self) -> flint.fmpq_mpoly:
        self._p = _lift(self._p)
        return self._p

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_one(self) -> bool:
        return self._p.is_one()

    def is_constant(self) -> bool:
        return self._p.is_constant()

    def terms(self) -> list[tuple[dict[str, int], Fraction]]:
        """Terms in decreasing monomial order as (exponent map, coefficient)."""
        names = self._p.context().names()
        out = []
        for exps, c in self._p.terms():
            out.append(({n: int(e) for n, e in zip(names, exps) if e}, _frac(c)))
        return out

    def variables(self) -> set[str]:
        return {n for mono, _ in self.terms() for n in mono}

    def degree(self, name: str) -> int:
        return max((mono.get(name, 0) for mono, _ in self.terms()), default=0)

    def leading_coefficient(self) -> Fraction:
        return _frac(self._p.leading_coefficient()) if not self.is_zero() else Fraction(0)

    def derivative(self, name: str) -> "Polynomial":
        if name not in self._p.context().names():
            return Polynomial(_ctx.constant(0))
        return Polynomial(self._p.derivative(name))

    def __add__(self, other):
        return Polynomial(self.raw + _as_poly(other).raw)

    __radd__ = __add__

    def __sub__(self, other):
        return Polynomial(self.raw - _as_poly(other).raw)

    def __rsub__(self, other):
        return Polynomial(_as_poly(other).raw - self.raw)

    def __mul__(self, other):
        return Polynomial(self.raw * _as_poly(other).raw)

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(-self._p)

    def __pow__(self, k: int):
        return Polynomial(self._p ** k)

    def __eq__(self, other):
        if not isinstance(other, (Polynomial, int, Fraction)):
            return NotImplemented
        return self.raw == _as_poly(other).raw

    def __hash__(self):
        return hash(tuple((tuple(sorted(m.items())), c) for m, c in self.terms()))

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(self.raw / other.raw)

    def __str__(self):
        return poly_to_text(self)

    def __repr__(self):
        return f"Polynomial({poly_to_text(self)!r})"


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial.const(x)


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Greatest common divisor normalized to a positive leading coefficient."""
    if p.is_zero() and q.is_zero():
        raise DomainError("gcd of two zero polynomials is undefined")
    g = p.raw.gcd(q.raw)
    lc = g.leading_coefficient()
    if lc < 0:
        g = -g
    return Polynomial(g)


class RationalExpr:
    """Canonical quotient num/den with gcd(num, den) = 1 and monic den."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, *, _canonical: bool = False):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero():
            raise EvaluationError("zero denominator")
        if not _canonical:
            num, den = _canonicalize(num.raw, den.raw)
        self.num = num
        self.den = den

    @classmethod
    def from_value(cls, x) -> "RationalExpr":
        if isinstance(x, RationalExpr):
            return x
        if isinstance(x, Polynomial):
            return cls(x, 1)
        if isinstance(x, str):
            return parse(x)
        return cls(Polynomial.const(x), Polynomial.const(1), _canonical=True)

    @classmethod
    def var(cls, name: str) -> "RationalExpr":
        return cls(Polynomial.var(name), Polynomial.const(1), _canonical=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("expression is not constant")
        return self.num.leading_coefficient() / self.den.leading_coefficient()

    def variables(self) -> set[str]:
        return self.num.variables() | self.den.variables()

    def __add__(self, other):
        o = _as_rat(other)
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self.den == o.den:
            return RationalExpr(self.num + o.num, self.den)
        return RationalExpr(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalExpr(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        return self + (-_as_rat(other))

    def __rsub__(self, other):
        return _as_rat(other) + (-self)

    def __mul__(self, other):
        o = _as_rat(other)
        if self.is_zero() or o.is_zero():
            return ZERO
        # cross-cancel first to keep intermediate sizes small
        g1 = self.num.raw.gcd(o.den.raw)
        g2 = o.num.raw.gcd(self.den.raw)
        n = Polynomial((self.num.raw / g1) * (o.num.raw / g2))
        d = Polynomial((self.den.raw / g2) * (o.den.raw / g1))
        return RationalExpr(*_normalize_den(n.raw, d.raw), _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalExpr":
        if self.is_zero():
            raise EvaluationError("division by zero")
        return RationalExpr(*_normalize_den(self.den.raw, self.num.raw), _canonical=True)

    def __truediv__(self, other):
        return self * _as_rat(other).inverse()

    def __rtruediv__(self, other):
        return _as_rat(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalExpr(self.num ** k, self.den ** k, _canonical=True)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, str, Polynomial)):
            other = _as_rat(other)
        if not isinstance(other, RationalExpr):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"RationalExpr({to_text(self)!r})"

    def theta(self, axis: int) -> "RationalExpr":
        return theta_apply(axis, self)

    def subs(self, bindings: Mapping) -> "RationalExpr":
        return substitute(self, bindings)

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate numerically with mpmath; every indeterminate must be bound."""
        n = eval_poly(self.num, values)
        d = eval_poly(self.den, values)
        if d == 0:
            raise EvaluationError("denominator vanishes at evaluation point")
        return n / d


def _normalize_den(n: flint.fmpq_mpoly, d: flint.fmpq_mpoly):
    lc = d.leading_coefficient()
    if lc != 1:
        inv = 1 / lc
        n = n * inv
        d = d * inv
    return Polynomial(n), Polynomial(d)


def _canonicalize(n: flint.fmpq_mpoly, d: flint.fmpq_mpoly):
    if n.is_zero():
        return Polynomial(_ctx.constant(0)), Polynomial(_ctx.constant(1))
    if not d.is_constant():
        g = n.gcd(d)
        if not g.is_constant():
            n = n / g
            d = d / g
    return _normalize_den(n, d)


def _as_rat(x) -> RationalExpr:
    if isinstance(x, RationalExpr):
        return x
    return RationalExpr.from_value(x)


ZERO = RationalExpr(0, 1, _canonical=True)
ONE = RationalExpr(1, 1, _canonical=True)


def add(p: RationalExpr, q: RationalExpr) -> RationalExpr:
    return _as_rat(p) + _as_rat(q)


def mul(p: RationalExpr, q: RationalExpr) -> RationalExpr:
    return _as_rat(p) * _as_rat(q)


def theta_apply(axis: int, r: RationalExpr) -> RationalExpr:
    """Return z_i * d r / d z_i exactly."""
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    r = _as_rat(r)
    z = f"z{axis}"
    zp = Polynomial.var(z)
    dn = r.num.derivative(z)
    dd = r.den.derivative(z)
    if dd.is_zero():
        return RationalExpr(zp * dn, r.den)
    return RationalExpr(zp * (dn * r.den - r.num * dd), r.den * r.den)


def _binding_poly(v) -> RationalExpr:
    if isinstance(v, str):
        return parse(v)
    return _as_rat(v)


def substitute(r: RationalExpr, bindings: Mapping) -> RationalExpr:
    """Simultaneous substitution of indeterminates by rationals or expressions."""
    r = _as_rat(r)
    if not bindings:
        return r
    vals = {k: _binding_poly(v) for k, v in bindings.items()}
    if all(v.is_constant() for v in vals.values()):
        num = r.num.raw
        den = r.den.raw
        qs = {k: _q(v.constant_value()) for k, v in vals.items() if k in _names}
        if qs:
            num = num.subs(qs)
            den = den.subs(qs)
        if den.is_zero():
            raise EvaluationError("substitution produces a zero denominator")
        return RationalExpr(Polynomial(num), Polynomial(den))
    _ensure([n for v in vals.values() for n in v.variables()])
    # common denominator for the images so one compose call suffices
    used = r.variables() & set(vals)
    if not used:
        return r
    lift_n = _subst_poly(r.num, vals)
    lift_d = _subst_poly(r.den, vals)
    if lift_d.is_zero():
        raise EvaluationError("substitution produces a zero denominator")
    return lift_n / lift_d


def _subst_poly(p: Polynomial, vals: Mapping[str, RationalExpr]) -> RationalExpr:
    polys_only = all(v.den.is_one() for v in vals.values())
    if polys_only:
        gens = list(_ctx.gens())
        for k, v in vals.items():
            if k in _names:
                gens[_names.index(k)] = v.num.raw
        return RationalExpr(Polynomial(p.raw.compose(*gens, ctx=_ctx)), 1)
    out = ZERO
    for mono, c in p.terms():
        term = RationalExpr.from_value(c)
        for name, e in mono.items():
            base = vals.get(name)
            term = term * (base ** e if base is not None else RationalExpr.var(name) ** e)
        out = out + term
    return out


def swap(r: RationalExpr, pairs: Iterable[tuple[str, str]]) -> RationalExpr:
    """Apply simultaneous transpositions of indeterminates."""
    b = {}
    for x, y in pairs:
        b[x] = RationalExpr.var(y)
        b[y] = RationalExpr.var(x)
    return substitute(r, b)


def eval_poly(p: Polynomial, values: Mapping[str, object]):
    import mpmath

    total = mpmath.mpf(0)
    for mono, c in p.terms():
        t = mpmath.mpf(c.numerator) / c.denominator
        for name, e in mono.items():
            if name not in values:
                raise EvaluationError(f"unbound indeterminate {name!r}")
            t *= mpmath.mpmathify(values[name]) ** e
        total += t
    return total


# ---------------------------------------------------------------------------
# text syntax

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(s: str) -> list[tuple[str, str]]:
    toks = []
    pos = 0
    s = s.rstrip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {s[pos:pos + 10]!r}")
        num, ident, op = m.groups()
        if num is not None:
            toks.append(("num", num))
        elif ident is not None:
            toks.append(("id", ident))
        else:
            toks.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, val):
        tok = self.take()
        if tok != ("op", val):
            raise ParseError(f"expected {val!r}, got {tok[1]!r}")

    def expr(self) -> RationalExpr:
        out = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> RationalExpr:
        out = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            out = out * rhs if op == "*" else out / rhs
        return out

    def unary(self) -> RationalExpr:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RationalExpr:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "num" or not val.isdigit():
                raise ParseError("exponent must be an integer")
            return base ** (sign * int(val))
        return base

    def atom(self) -> RationalExpr:
        kind, val = self.take()
        if kind == "num":
            return RationalExpr.from_value(Fraction(val))
        if kind == "id":
            return RationalExpr.var(val)
        if (kind, val) == ("op", "("):
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected token {val!r}")


def parse(s: str) -> RationalExpr:
    """Parse the plain-text syntax (+ - * / ^, parentheses, identifiers)."""
    toks = _tokenize(s)
    if not toks:
        raise ParseError("empty expression")
    p = _Parser(toks)
    out = p.expr()
    if p.i != len(toks):
        raise ParseError(f"trailing input at token {p.i}: {p.peek()[1]!r}")
    return out


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_mono(mono: Mapping[str, int]) -> str:
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in mono.items())


def poly_to_text(p: Polynomial) -> str:
    terms = p.terms()
    if not terms:
        return "0"
    parts = []
    for k, (mono, c) in enumerate(terms):
        neg = c < 0
        a = -c if neg else c
        m = _fmt_mono(mono)
        if not m:
            body = _fmt_coeff(a)
        elif a == 1:
            body = m
        else:
            body = f"{_fmt_coeff(a)}*{m}"
        if k == 0:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    return "".join(parts)


def _integer_scale(r: RationalExpr) -> tuple[Polynomial, Polynomial]:
    """Scale num and den to coprime integer coefficients, den lead positive."""
    from math import gcd as igcd, lcm

    coeffs = [c for _, c in r.num.terms()] + [c for _, c in r.den.terms()]
    L = 1
    for c in coeffs:
        L = lcm(L, c.denominator)
    G = 0
    for c in coeffs:
        G = igcd(G, int(c * L))
    s = Fraction(L, G)
    return r.num * s, r.den * s


def _needs_parens(p: Polynomial) -> bool:
    terms = p.terms()
    if len(terms) > 1:
        return True
    mono, c = terms[0]
    return c < 0 or (bool(mono) and c != 1) or c.denominator != 1


def to_text(r: RationalExpr) -> str:
    """Render as text; ``parse(to_text(r)) == r`` always holds."""
    r = _as_rat(r)
    if r.den.is_one():
        return poly_to_text(r.num)
    n, d = _integer_scale(r)
    ns = poly_to_text(n)
    ds = poly_to_text(d)
    if len(n.terms()) > 1:
        ns = f"({ns})"
    if _needs_parens(d) or "*" in ds:
        ds = f"({ds})"
    return f"{ns}/{ds}"


def to_cas(r: RationalExpr) -> str:
    """Render for CAS input: explicit ``*`` and ``^`` with parenthesized quotients."""
    r = _as_rat(r)
    if r.den.is_one():
        return poly_to_text(r.num)
    n, d = _integer_scale(r)
    return f"({poly_to_text(n)})/({poly_to_text(d)})"


Number = Union[int, Fraction]
