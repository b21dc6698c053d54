"""Differential reduction: H(J) = (q0 + q1*theta1 + q2*theta2 + q12*theta1*theta2) H(J + m)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import mpmath

from .catalog import exceptional_check, get_definition
from .errors import DomainError, EvaluationError, ExceptionalParametersError
from .operators import direct_step, invert, system_at
from .series import DEFAULT_DPS, TAIL_TOL, EvalPoint, _mp, eval_series
from .symbolic import RationalExpr, parse, substitute, to_cas, to_text
from .theta import ThetaOperator


@dataclass(frozen=True)
class ReductionResult:
    function: str
    shift: tuple[int, ...]
    params: tuple[RationalExpr, ...]
    operator: ThetaOperator
    new_params: tuple[RationalExpr, ...]

    @property
    def q0(self):
        return self.operator.c0

    @property
    def q1(self):
        return self.operator.c1

    @property
    def q2(self):
        return self.operator.c2

    @property
    def q12(self):
        return self.operator.c12

    @property
    def coefficients(self) -> tuple[RationalExpr, ...]:
        return self.operator.coeffs

    def to_text(self) -> str:
        q = ",".join(to_text(c).replace(" ", "") for c in self.coefficients)
        p = ",".join(to_text(v).replace(" ", "") for v in self.new_params)
        return "{{" + q + "},{" + p + "}}"

    def to_cas(self) -> str:
        q = ", ".join(to_cas(c) for c in self.coefficients)
        p = ", ".join(to_cas(v) for v in self.new_params)
        return "{{" + q + "}, {" + p + "}}"

    def to_json(self) -> dict:
        return {
            "function": self.function,
            "shift": list(self.shift),
            "params": [to_text(v) for v in self.params],
            "coefficients": dict(zip(("q0", "q1", "q2", "q12"), (to_text(c) for c in self.coefficients))),
            "new_params": [to_text(v) for v in self.new_params],
        }


def plan_path(defn, shift: Sequence[int]) -> list[tuple[str, int]]:
    """Unit steps in catalog parameter order, |m_i| steps of sign(m_i) each."""
    defn = get_definition(defn)
    if len(shift) != len(defn.params):
        raise DomainError(f"{defn.name} takes {len(defn.params)} shifts, got {len(shift)}")
    steps = []
    for p, m in zip(defn.params, shift):
        steps.extend([(p, 1 if m > 0 else -1)] * abs(int(m)))
    return steps


def _as_param(v) -> RationalExpr:
    if isinstance(v, RationalExpr):
        return v
    if isinstance(v, str):
        return parse(v)
    return RationalExpr.from_value(Fraction(v))


def _context(defn, base: Mapping[str, RationalExpr], offset: Mapping[str, int]) -> dict:
    """Bindings of catalog symbols at the current parameters (identity entries omitted)."""
    out = {}
    for p in defn.params:
        v = base[p] + offset[p] if offset[p] else base[p]
        if v != RationalExpr.var(p):
            out[p] = v
    return out


def reduce(name, shift: Sequence[int], params: Optional[Sequence] = None) -> ReductionResult:
    """Coefficients expressing H(params) through H(params + shift) and its theta-derivatives."""
    defn = get_definition(name)
    steps = plan_path(defn, shift)
    params = list(defn.params) if params is None else list(params)
    if len(params) != len(defn.params):
        raise DomainError(f"{defn.name} takes {len(defn.params)} parameters, got {len(params)}")
    base = {p: _as_param(v) for p, v in zip(defn.params, params)}
    if all(v.is_constant() for v in base.values()):
        hit = exceptional_check(defn, {p: v.constant_value() for p, v in base.items()})
        if hit:
            raise ExceptionalParametersError(defn.name, hit)
    offset = {p: 0 for p in defn.params}
    op = ThetaOperator.identity()
    try:
        for p, d in steps:
            here = _context(defn, base, offset)
            offset[p] += d
            there = _context(defn, base, offset)
            upper = defn.role(p) == "upper"
            if (upper and d < 0) or (not upper and d > 0):
                X = direct_step(defn, p)
                X = X.subs(there) if there else X
            else:
                X = invert(defn, p, here or None)
            op = system_at(defn, there or None).compose(op, X)
    except (EvaluationError, ZeroDivisionError) as exc:
        raise DomainError(f"{defn.name}: reduction degenerates at these parameters ({exc})") from exc
    new = tuple(base[p] + offset[p] for p in defn.params)
    return ReductionResult(defn.name, tuple(int(m) for m in shift), tuple(base[p] for p in defn.params), op, new)


# ---------------------------------------------------------------------------
# numeric verification


@dataclass
class VerificationReport:
    function: str
    z: tuple
    params: dict
    lhs: object
    rhs: object
    rel_error: object
    converged: bool
    passed: bool
    tol: float
    reason: str = ""

    @property
    def status(self) -> str:
        if not self.converged:
            return "inconclusive"
        return "pass" if self.passed else "fail"

    def as_dict(self) -> dict:
        return {
            "z": [str(v) for v in self.z],
            "params": {k: str(v) for k, v in self.params.items()},
            "lhs": mpmath.nstr(self.lhs, 20),
            "rhs": mpmath.nstr(self.rhs, 20),
            "rel_error": mpmath.nstr(self.rel_error, 5),
            "status": self.status,
            "reason": self.reason,
        }


def verify_reduction(name, result: ReductionResult, params: Mapping[str, object], z: Sequence,
                     N: int = 40, tol: float = 1e-10, dps: int = DEFAULT_DPS) -> VerificationReport:
    """Compare both sides of the reduction identity with truncated series at one point.

    A converged series is only trusted to the tail threshold, so a tolerance below
    that precision budget cannot be certified and the point fails.
    """
    defn = get_definition(name)
    pv = {p: Fraction(params[p]) for p in defn.params}
    bind = {p: pv[p] for p in defn.params}
    # result parameters may themselves be expressions in the catalog symbols
    old = {p: substitute(v, bind).constant_value() for p, v in zip(defn.params, result.params)}
    new = {p: substitute(v, bind).constant_value() for p, v in zip(defn.params, result.new_params)}
    z = tuple(Fraction(v) if not isinstance(v, (mpmath.mpf, mpmath.mpc, complex, float)) else v for v in z)
    left = eval_series(defn, EvalPoint(old, z), N, dps, max_order=1)
    right = eval_series(defn, EvalPoint(new, z), N, dps, max_order=1)
    with mpmath.workdps(dps):
        vals = {**{k: _mp(v) for k, v in bind.items()}, "z1": _mp(z[0]), "z2": _mp(z[1])}
        q = [substitute(c, bind).evaluate(vals) for c in result.coefficients]
        rhs = q[0] * right.value + q[1] * right.theta1 + q[2] * right.theta2 + q[3] * right.theta12
        lhs = left.value
        err = abs(lhs - rhs) / (abs(lhs) if lhs != 0 else 1)
    converged = left.converged and right.converged
    reason = ""
    if tol < TAIL_TOL:
        reason = f"tolerance {tol:g} is below the precision budget {mpmath.nstr(TAIL_TOL, 3)}"
    elif not err < tol:
        reason = f"relative error exceeds {tol:g}"
    passed = bool(converged and not reason)
    return VerificationReport(defn.name, z, pv, lhs, rhs, err, converged, passed, tol, reason)
