"""Special functions backing the singular-kernel quadrature weights.

Only positive real arguments arise anywhere in the toolbox, so the classic
real-axis algorithms suffice: the series / continued-fraction split for the
regularized lower incomplete gamma function (Numerical Recipes, ch. 6) and a
direct Kummer series for the confluent hypergeometric function M(a; c; z).
Both are vectorized over the argument.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidParameter, NonConvergence

_EPS = np.finfo(float).eps
_TINY = 1e-300
_MAX_ITER = 600


def _as_positive_array(x, name: str) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise InvalidParameter(f"{name} must be finite and >= 0")
    return arr, scalar


def reg_lower_gamma(a: float, x):
    """Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0.

    Series representation for x < a + 1, modified Lentz continued fraction
    otherwise; ~1e-15 relative accuracy over the a in (0, 3] range the
    quadrature weights use.
    """
    if not (isinstance(a, (int, float)) and math.isfinite(a) and a > 0.0):
        raise InvalidParameter("shape parameter a must be finite and > 0")
    arr, scalar = _as_positive_array(x, "x")
    out = np.empty_like(arr)
    ser = arr < a + 1.0
    out[ser] = _gamma_series(float(a), arr[ser])
    out[~ser] = 1.0 - _gamma_cf(float(a), arr[~ser])
    return float(out[0]) if scalar else out.reshape(np.shape(x))


def lower_gamma(a: float, x):
    """Lower incomplete gamma: reg_lower_gamma scaled by Gamma(a)."""
    return reg_lower_gamma(a, x) * math.gamma(a)


def _gamma_series(a: float, x: np.ndarray) -> np.ndarray:
    res = np.zeros_like(x)
    pos = x > 0.0
    xp = x[pos]
    if xp.size == 0:
        return res
    ap = a
    delt = np.full(xp.shape, 1.0 / a)
    total = delt.copy()
    active = np.ones(xp.shape, dtype=bool)
    for _ in range(_MAX_ITER):
        ap += 1.0
        delt = delt * (xp / ap)
        total = np.where(active, total + delt, total)
        active &= np.abs(delt) >= np.abs(total) * _EPS
        if not active.any():
            break
    else:
        raise NonConvergence("incomplete gamma series did not converge")
    res[pos] = total * np.exp(-xp + a * np.log(xp) - math.lgamma(a))
    return res


def _gamma_cf(a: float, x: np.ndarray) -> np.ndarray:
    if x.size == 0:
        return np.zeros_like(x)
    b = x + 1.0 - a
    c = np.full(x.shape, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = b + an / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        delt = d * c
        h = h * delt
        # near x ~ a+1 the quotient stalls a few ulps away from 1
        if np.all(np.abs(delt - 1.0) < 8.0 * _EPS):
            break
    else:
        raise NonConvergence("incomplete gamma continued fraction did not converge")
    return h * np.exp(-x + a * np.log(x) - math.lgamma(a))


def kummer_m(a: float, c: float, z):
    """Confluent hypergeometric M(a; c; z) by direct series, z >= 0.

    Used for the closed-form moments of the power-singular kernel against
    fractional monomials; arguments stay modest (z up to a few tens), where
    the series needs well under a hundred terms.
    """
    if c <= 0.0 or not math.isfinite(c) or not math.isfinite(a):
        raise InvalidParameter("kummer_m requires finite a and c > 0")
    arr, scalar = _as_positive_array(z, "z")
    term = np.ones_like(arr)
    total = term.copy()
    for k in range(_MAX_ITER):
        term = term * arr * ((a + k) / ((c + k) * (k + 1.0)))
        total = total + term
        if np.all(np.abs(term) <= np.abs(total) * _EPS):
            break
    else:
        raise NonConvergence("Kummer series did not converge")
    return float(total[0]) if scalar else total.reshape(np.shape(z))
