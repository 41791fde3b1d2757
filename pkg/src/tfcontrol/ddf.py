"""Minimal double-double arithmetic (~31 significant digits).

The Mittag-Leffler series for arguments with large negative spectrum suffers
massive term cancellation: partial-sum terms peak many orders of magnitude
above the result, so plain float64 summation loses the answer. Carrying the
running term and partial sums as unevaluated (hi, lo) pairs restores ~1e-31
effective roundoff at roughly twice the float cost.

All helpers are written against the arithmetic operators only, so they accept
python floats and numpy arrays alike. Error-free transforms follow the
classic Dekker / Knuth constructions (no FMA assumed).
"""

from __future__ import annotations

_SPLITTER = 134217729.0  # 2**27 + 1

# unit roundoff of a double-double value
DD_EPS = 2.0**-104


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a, b):
    # requires |a| >= |b|, which holds for the normalization uses below
    s = a + b
    return s, b - (s - a)


def split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def dd_add(xh, xl, yh, yl):
    s, e = two_sum(xh, yh)
    e = e + (xl + yl)
    return quick_two_sum(s, e)


def dd_mul(xh, xl, yh, yl):
    p, e = two_prod(xh, yh)
    e = e + (xh * yl + xl * yh)
    return quick_two_sum(p, e)


def dd_scale(xh, xl, c):
    """Multiply a dd value by an exact double c."""
    p, e = two_prod(xh, c)
    e = e + xl * c
    return quick_two_sum(p, e)
