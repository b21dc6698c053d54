"""Independent numeric oracles: log-gamma coefficients and finite differences."""

from __future__ import annotations

from fractions import Fraction

import mpmath

from hornreduce.catalog import get_definition
from hornreduce.series import EvalPoint, eval_series


def _mp(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpmathify(v)


def loggamma_coefficient(name, params, m1: int, m2: int, dps: int = 50):
    """C(m1, m2) from Gamma(p + mu.m)/Gamma(p) via complex log-gamma, no ratio chain."""
    defn = get_definition(name)
    with mpmath.workdps(dps):
        acc = mpmath.mpc(0)
        for f in defn.factors:
            p = _mp(params[f.param])
            k = f.mu[0] * m1 + f.mu[1] * m2
            term = mpmath.loggamma(p + k) - mpmath.loggamma(p)
            acc += term if f.role == "upper" else -term
        acc -= mpmath.loggamma(m1 + 1) + mpmath.loggamma(m2 + 1)
        return mpmath.re(mpmath.exp(acc))


def loggamma_sum(name, params, z, N: int, dps: int = 50):
    """Direct term-by-term sum over 0 <= m_i <= N with log-gamma coefficients."""
    with mpmath.workdps(dps):
        z1, z2 = (_mp(v) for v in z)
        return mpmath.fsum(
            loggamma_coefficient(name, params, i, j, dps) * z1 ** i * z2 ** j
            for i in range(N + 1) for j in range(N + 1)
        )


def finite_difference_thetas(name, params, z, h, N: int = 40, dps: int = 60):
    """Central differences for theta1 H, theta2 H and theta1 theta2 H (error O(h^2))."""
    with mpmath.workdps(dps):
        z1, z2 = (_mp(v) for v in z)
        h = _mp(h)

        def H(a, b):
            return eval_series(name, EvalPoint(params, (a, b)), N, dps, max_order=0).value

        d1 = (H(z1 + h, z2) - H(z1 - h, z2)) / (2 * h)
        d2 = (H(z1, z2 + h) - H(z1, z2 - h)) / (2 * h)
        d12 = (H(z1 + h, z2 + h) - H(z1 + h, z2 - h) - H(z1 - h, z2 + h) + H(z1 - h, z2 - h)) / (4 * h * h)
        # theta1 theta2 = z1 z2 d1 d2
        return z1 * d1, z2 * d2, z1 * z2 * d12
