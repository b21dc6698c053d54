"""Truncated double-series evaluation used as a numeric oracle."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Sequence

import mpmath

from .annihilator import coefficient_ratio
from .catalog import exceptional_check, get_definition
from .errors import EvaluationError

DEFAULT_DPS = int(os.environ.get("HORNREDUCE_DPS", "60"))
TAIL_TOL = mpmath.mpf("1e-14")


def pochhammer_int(x, n: int):
    """(x)_n for any integer n; exact for int/Fraction input."""
    exact = isinstance(x, (int, Fraction))
    one = Fraction(1) if exact else mpmath.mpf(1)
    out = one
    if n >= 0:
        for k in range(n):
            out *= x + k
        return out
    for k in range(1, -n + 1):
        f = x - k
        if f == 0:
            raise EvaluationError(f"pole of ({x})_{n}")
        out *= f
    return one / out


@dataclass(frozen=True)
class EvalPoint:
    params: Mapping[str, Fraction]
    z: tuple

    def as_dict(self) -> dict:
        return {"params": {k: str(v) for k, v in self.params.items()}, "z": [str(v) for v in self.z]}


@dataclass
class EvalReport:
    value: object
    theta1: object
    theta2: object
    theta12: object
    tail_bound: object
    converged: bool
    moments: dict = field(default_factory=dict, repr=False)

    def as_dict(self) -> dict:
        fmt = lambda v: mpmath.nstr(v, 20)
        return {
            "value": fmt(self.value),
            "theta1": fmt(self.theta1),
            "theta2": fmt(self.theta2),
            "theta12": fmt(self.theta12),
            "tail_bound": mpmath.nstr(self.tail_bound, 5),
            "converged": self.converged,
        }


def _ratio_terms(name: str, axis: int, params: Mapping[str, Fraction]):
    """Numerator and denominator of the coefficient ratio as (coeff, e1, e2) lists."""
    cr = coefficient_ratio(name, axis)
    out = []
    for poly in (cr.P, cr.Q):
        collected: dict[tuple[int, int], mpmath.mpf] = {}
        for mono, c in poly.terms():
            v = mpmath.mpf(c.numerator) / c.denominator
            for p, e in mono.items():
                if p in ("m1", "m2"):
                    continue
                v *= _mp(params[p]) ** e
            key = (mono.get("m1", 0), mono.get("m2", 0))
            collected[key] = collected.get(key, 0) + v
        out.append([(v, e1, e2) for (e1, e2), v in collected.items()])
    return out


def _peval(terms, m1: int, m2: int):
    return sum(c * (m1 ** e1) * (m2 ** e2) for c, e1, e2 in terms)


def _param_key(params: Mapping[str, object]) -> tuple:
    return tuple(sorted((k, str(Fraction(v) if not isinstance(v, mpmath.mpf) else v)) for k, v in params.items()))


@lru_cache(maxsize=256)
def _lattice(name: str, key: tuple, N: int, dps: int):
    params = {k: Fraction(v) for k, v in key}
    with mpmath.workdps(dps):
        (P1, Q1), (P2, Q2) = (_ratio_terms(name, ax, params) for ax in (1, 2))
        C = [[mpmath.mpf(0)] * (N + 1) for _ in range(N + 1)]
        C[0][0] = mpmath.mpf(1)
        for m1 in range(N + 1):
            if m1 > 0:
                q = _peval(Q1, m1 - 1, 0)
                if q == 0:
                    raise EvaluationError(f"{name}: pole in coefficient ratio at m=({m1 - 1}, 0)")
                C[m1][0] = C[m1 - 1][0] * _peval(P1, m1 - 1, 0) / q
            for m2 in range(1, N + 1):
                q = _peval(Q2, m1, m2 - 1)
                if q == 0:
                    raise EvaluationError(f"{name}: pole in coefficient ratio at m=({m1}, {m2 - 1})")
                C[m1][m2] = C[m1][m2 - 1] * _peval(P2, m1, m2 - 1) / q
    return C


def coefficient_lattice(defn, params: Mapping[str, object], N: int, dps: int = DEFAULT_DPS):
    """C(m1, m2) for 0 <= m_i <= N built along the lattice from coefficient ratios."""
    defn = get_definition(defn)
    return _lattice(defn.name, _param_key({p: params[p] for p in defn.params}), N, dps)


def eval_series(defn, point: EvalPoint, N: int = 40, dps: int = DEFAULT_DPS, max_order: int = 2) -> EvalReport:
    """Sum the series and its theta-moments m1^i m2^j (i, j <= max_order)."""
    defn = get_definition(defn)
    if N < 1:
        raise ValueError("N must be at least 1")
    C = coefficient_lattice(defn, point.params, N, dps)
    with mpmath.workdps(dps):
        z1, z2 = (_mp(v) for v in point.z)
        K = max(max_order, 1)
        mom = {(i, j): mpmath.mpf(0) for i in range(K + 1) for j in range(K + 1)}
        shell = mpmath.mpf(0)
        p1 = [z1 ** k for k in range(N + 1)]
        p2 = [z2 ** k for k in range(N + 1)]
        pw = [[mpmath.mpf(m) ** j for j in range(K + 1)] for m in range(N + 1)]
        for m1 in range(N + 1):
            row = C[m1]
            terms = [row[m2] * p2[m2] for m2 in range(N + 1)]
            sums = [mpmath.fsum(t * pw[m2][j] for m2, t in enumerate(terms)) for j in range(K + 1)]
            w = p1[m1]
            for i in range(K + 1):
                f = w * pw[m1][i]
                for j in range(K + 1):
                    mom[(i, j)] += f * sums[j]
            if m1 == N:
                shell += w * mpmath.fsum(abs(t) for t in terms)
            else:
                shell += abs(w * terms[N])
        value = mom[(0, 0)]
        scale = abs(value) if value != 0 else mpmath.mpf(1)
        tail = shell / scale
        return EvalReport(
            value=value,
            theta1=mom[(1, 0)],
            theta2=mom[(0, 1)],
            theta12=mom[(1, 1)],
            tail_bound=tail,
            converged=bool(tail < TAIL_TOL),
            moments=mom,
        )


# ---------------------------------------------------------------------------
# sampling

_PRIMES = (7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


def _locus_ok(poly, z1: Fraction, z2: Fraction, margin: float = 0.5) -> bool:
    vals = []
    for mono, c in poly.terms():
        v = c
        v *= z1 ** mono.get("z1", 0)
        v *= z2 ** mono.get("z2", 0)
        vals.append(v)
    at = abs(sum(vals))
    const = abs(sum(c for mono, c in poly.terms() if not mono))
    if const:
        return at > margin * const
    return at > margin * sum(abs(v) for v in vals)


def sample_params(defn, rng: random.Random) -> dict[str, Fraction]:
    """Rationals x/p with distinct primes p >= 7, so no small integer combination is integral."""
    defn = get_definition(defn)
    primes = rng.sample(_PRIMES, len(defn.params))
    while True:
        vals = {p: Fraction(rng.randint(1, q - 1), q) for p, q in zip(defn.params, primes)}
        if not exceptional_check(defn, vals):
            return vals


def sample_z(defn, rng: random.Random, zmax: float = 0.1, zmin: float = 0.02) -> tuple[Fraction, Fraction]:
    defn = get_definition(defn)
    loci = defn.locus()
    lo, hi = int(zmin * 1000), int(zmax * 1000)
    while True:
        z = tuple(Fraction(rng.choice((-1, 1)) * rng.randint(lo, hi), 1000) for _ in range(2))
        if all(_locus_ok(p, *z) for p in loci):
            return z


def sample_points(defn, count: int, seed: int = 0, params: Optional[Mapping[str, Fraction]] = None) -> list[EvalPoint]:
    """Deterministic generic points: fresh parameters per point unless ``params`` is fixed."""
    defn = get_definition(defn)
    rng = random.Random(f"{defn.name}:{seed}")
    out: list[EvalPoint] = []
    seen = set()
    while len(out) < count:
        pv = dict(params) if params is not None else sample_params(defn, rng)
        z = sample_z(defn, rng)
        key = (tuple(sorted(pv.items())), z)
        if key in seen:
            continue
        seen.add(key)
        out.append(EvalPoint(pv, z))
    return out


def theta_residual(defn, expr_terms: Mapping[tuple[int, int], object], point: EvalPoint, N: int = 40,
                   dps: int = DEFAULT_DPS) -> tuple[object, bool]:
    """Relative residual of sum_c c(z) * theta1^i theta2^j H at ``point``.

    ``expr_terms`` maps (i, j) to a RationalExpr in parameters and z.
    """
    defn = get_definition(defn)
    order = max(max(k) for k in expr_terms)
    rep = eval_series(defn, point, N, dps, max_order=max(order, 1))
    values = {**{p: v for p, v in point.params.items()}, "z1": point.z[0], "z2": point.z[1]}
    with mpmath.workdps(dps):
        vals = {k: _mp(v) for k, v in values.items()}
        parts = [c.evaluate(vals) * rep.moments[k] for k, c in expr_terms.items()]
        total = abs(sum(parts))
        scale = max(abs(p) for p in parts) or mpmath.mpf(1)
        return total / scale, rep.converged


def _mp(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpmathify(v)
