"""Coefficient ratios, annihilating theta-operators and the basis rewrite system."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from .catalog import HornDefinition, get_definition
from .errors import StructureError
from .symbolic import ONE, ZERO, Polynomial, RationalExpr, substitute, theta_apply
from .theta import ThetaOperator

M1, M2 = Polynomial.var("m1"), Polynomial.var("m2")
T1, T2 = Polynomial.var("t1"), Polynomial.var("t2")
Z = {1: Polynomial.var("z1"), 2: Polynomial.var("z2")}


@dataclass(frozen=True)
class CoeffRatio:
    """C(m + e_axis) / C(m) = P(m) / Q(m)."""

    axis: int
    P: Polynomial
    Q: Polynomial


def coefficient_ratio(defn, axis: int) -> CoeffRatio:
    defn = get_definition(defn)
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    P = Polynomial.const(1)
    Q = M1 + 1 if axis == 1 else M2 + 1
    for f in defn.factors:
        k = f.mu[0] * M1 + f.mu[1] * M2 + Polynomial.var(f.param)
        step = f.mu[axis - 1]
        if step > 0:
            prod = Polynomial.const(1)
            for t in range(step):
                prod = prod * (k + t)
        else:
            # (x)_{k-s} / (x)_k = 1 / ((x+k-1)...(x+k-s))
            prod = Polynomial.const(1)
            for t in range(1, -step + 1):
                prod = prod * (k - t)
        if (step > 0) == (f.role == "upper"):
            P = P * prod
        else:
            Q = Q * prod
    r = RationalExpr(P, Q)
    lc = r.den.leading_coefficient()
    return CoeffRatio(axis, r.num * lc, r.den * lc) if lc < 0 else CoeffRatio(axis, r.num, r.den)


def annihilator_operator(defn, axis: int) -> Polynomial:
    """Q(theta - e_axis) - z_axis * P(theta), with t1, t2 standing for theta1, theta2.

    Coefficients stand to the left of the theta monomials.
    """
    cr = coefficient_ratio(defn, axis)
    shift = {"m1": T1 - 1 if axis == 1 else T1, "m2": T2 - 1 if axis == 2 else T2}
    Qs = _compose_m(cr.Q, shift)
    Ps = _compose_m(cr.P, {"m1": T1, "m2": T2})
    return Qs - Z[axis] * Ps


def _compose_m(p: Polynomial, images: Mapping[str, Polynomial]) -> Polynomial:
    r = substitute(RationalExpr(p, 1), {k: RationalExpr(v, 1) for k, v in images.items()})
    return r.num


def theta_terms(r) -> dict[tuple[int, int], RationalExpr]:
    """Split an expression polynomial in t1, t2 into {(i, j): coefficient}."""
    if isinstance(r, Polynomial):
        r = RationalExpr(r, 1)
    if r.den.degree("t1") or r.den.degree("t2"):
        raise StructureError("theta symbols in a denominator")
    groups: dict[tuple[int, int], list] = {}
    for mono, c in r.num.terms():
        key = (mono.get("t1", 0), mono.get("t2", 0))
        rest = {k: v for k, v in mono.items() if k not in ("t1", "t2")}
        term = Polynomial.const(c)
        for name, e in rest.items():
            term = term * Polynomial.var(name) ** e
        groups.setdefault(key, []).append(term)
    out = {}
    for key, terms in groups.items():
        s = terms[0]
        for t in terms[1:]:
            s = s + t
        out[key] = RationalExpr(s, r.den)
    return out


@dataclass(frozen=True)
class ThetaRelation:
    """head * H = (c0 + c1*theta1 + c2*theta2 + c12*theta1*theta2) * H."""

    head: str
    coeffs: ThetaOperator


_BASIS_KEYS = {(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 3}


def _vec(terms: Mapping[tuple[int, int], RationalExpr]) -> list[RationalExpr]:
    v = [ZERO] * 4
    for key, c in terms.items():
        if key not in _BASIS_KEYS:
            raise StructureError(f"unexpected theta monomial {key}")
        v[_BASIS_KEYS[key]] = c
    return v


def _axpy(f: RationalExpr, x: Sequence[RationalExpr], y: Sequence[RationalExpr]) -> list[RationalExpr]:
    return [f * a + b for a, b in zip(x, y)]


class ThetaSystem:
    """Action of theta1, theta2 on the basis of one function at fixed parameters.

    ``M[i][k]`` is the normal form of theta_i * b_k as a coefficient vector.
    """

    def __init__(self, name: str, rank: int, M1: list, M2: list, bindings: Mapping = None):
        self.name = name
        self.rank = rank
        self.M = {1: M1, 2: M2}
        self.bindings = dict(bindings or {})

    def apply_theta(self, axis: int, op: ThetaOperator) -> ThetaOperator:
        """theta_axis * op, with coefficients differentiated by the product rule."""
        v = op.vector(self.rank)
        out = [theta_apply(axis, c) for c in v]
        Mi = self.M[axis]
        for k, c in enumerate(v):
            if c.is_zero():
                continue
            out = _axpy(c, Mi[k], out)
        return ThetaOperator.from_vector(out)

    def apply_word(self, word: Sequence[int], op: ThetaOperator) -> ThetaOperator:
        for axis in reversed(tuple(word)):
            op = self.apply_theta(axis, op)
        return op

    def compose(self, outer: ThetaOperator, inner: ThetaOperator) -> ThetaOperator:
        """outer * inner, reduced in this (inner's) function context."""
        t2_inner = self.apply_theta(2, inner)
        images = [inner, self.apply_theta(1, inner), t2_inner]
        if not outer.c12.is_zero():
            images.append(self.apply_theta(1, t2_inner))
        acc = ThetaOperator.zero()
        for c, img in zip(outer.coeffs, images):
            if not c.is_zero():
                acc = acc + img.scale(c)
        return acc

    def substitute(self, bindings: Mapping) -> "ThetaSystem":
        sub = lambda rows: [[substitute(c, bindings) for c in row] for row in rows]
        merged = {k: substitute(RationalExpr.from_value(v), bindings) for k, v in self.bindings.items()}
        merged.update({k: v for k, v in bindings.items() if k not in merged})
        return ThetaSystem(self.name, self.rank, sub(self.M[1]), sub(self.M[2]), merged)


def _solve_pure_squares(defn: HornDefinition):
    L = [theta_terms(annihilator_operator(defn, j)) for j in (1, 2)]
    for Lj in L:
        bad = [k for k in Lj if sum(k) > 2]
        if bad:
            raise StructureError(f"{defn.name}: annihilator of order above two")
    al = [Lj.pop((2, 0), ZERO) for Lj in L]
    be = [Lj.pop((0, 2), ZERO) for Lj in L]
    r = [_vec(Lj) for Lj in L]
    det = al[0] * be[1] - al[1] * be[0]
    if det.is_zero():
        raise StructureError(f"{defn.name}: annihilators do not determine theta1^2, theta2^2")
    inv = det.inverse()
    R11 = [inv * (-be[1] * x + be[0] * y) for x, y in zip(r[0], r[1])]
    R22 = [inv * (al[1] * x - al[0] * y) for x, y in zip(r[0], r[1])]
    return R11, R22


def _theta_vec4(axis, v, R11, R22):
    """theta_axis applied to a vector over {1, t1, t2} (no t12 part) within the 4-basis."""
    out = [theta_apply(axis, c) for c in v]
    # theta_axis * 1, theta_axis * theta1, theta_axis * theta2
    images = {
        1: [[ZERO, ONE, ZERO, ZERO], R11, [ZERO, ZERO, ZERO, ONE]],
        2: [[ZERO, ZERO, ONE, ZERO], [ZERO, ZERO, ZERO, ONE], R22],
    }[axis]
    for k in range(3):
        if not v[k].is_zero():
            out = _axpy(v[k], images[k], out)
    return out


@lru_cache(maxsize=None)
def generic_system(name: str) -> ThetaSystem:
    """Rewrite system at symbolic parameters, cached per function."""
    defn = get_definition(name)
    R11, R22 = _solve_pure_squares(defn)
    e0, e1, e2, e12 = ([ONE if i == k else ZERO for i in range(4)] for k in range(4))
    if defn.rank == 4:
        P0, R0 = R11[3], R22[3]
        # theta1^2 theta2 = P0 * Y + u and theta1 theta2^2 = R0 * X + v
        u = _theta_vec4(2, R11[:3] + [ZERO], R11, R22)
        u = _axpy(theta_apply(2, P0), e12, u)
        v = _theta_vec4(1, R22[:3] + [ZERO], R11, R22)
        v = _axpy(theta_apply(1, R0), e12, v)
        den = ONE - P0 * R0
        if den.is_zero():
            raise StructureError(f"{defn.name}: 1 - P0*R0 vanishes, rank-4 completion impossible")
        X = [(P0 * b + a) / den for a, b in zip(u, v)]
        Y = _axpy(R0, X, v)
        return ThetaSystem(defn.name, 4, [e1, R11, e12, X], [e2, e12, R22, Y])
    E = theta_terms(defn.extra_relation())
    w = [ZERO] * 4
    for key, c in E.items():
        if key == (2, 0):
            w = _axpy(c, R11, w)
        elif key == (0, 2):
            w = _axpy(c, R22, w)
        elif key in _BASIS_KEYS:
            w[_BASIS_KEYS[key]] = w[_BASIS_KEYS[key]] + c
        else:
            raise StructureError(f"{defn.name}: extra relation of order above two")
    if w[3].is_zero():
        raise StructureError(f"{defn.name}: extra relation does not determine theta1*theta2")
    S = [-(x / w[3]) for x in w[:3]]
    r11 = _axpy(R11[3], S, R11[:3])
    r22 = _axpy(R22[3], S, R22[:3])
    f0, f1, f2 = ([ONE if i == k else ZERO for i in range(3)] for k in range(3))
    return ThetaSystem(defn.name, 3, [f1, r11, S], [f2, S, r22])


def rewrite_rules(defn) -> list[ThetaRelation]:
    """theta1^2, theta2^2 (and theta1*theta2 for rank 3) over the basis."""
    defn = get_definition(defn)
    sysm = generic_system(defn.name)
    one = ThetaOperator.identity()
    t1 = sysm.apply_theta(1, one)
    t2 = sysm.apply_theta(2, one)
    rules = [
        ThetaRelation("theta1^2", sysm.apply_theta(1, t1)),
        ThetaRelation("theta2^2", sysm.apply_theta(2, t2)),
    ]
    if defn.rank == 3:
        rules.append(ThetaRelation("theta1*theta2", sysm.apply_theta(1, t2)))
    return rules


def reduce_theta_word(defn, word: Sequence[int], seed: Optional[ThetaOperator] = None) -> ThetaOperator:
    """Apply theta_{w1} theta_{w2} ... to ``seed`` and normal-form the result."""
    defn = get_definition(defn)
    seed = ThetaOperator.identity() if seed is None else seed
    return generic_system(defn.name).apply_word(word, seed)
