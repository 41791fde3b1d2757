"""Product-integration helpers for tempered power-law kernels.

Every weakly singular integral in the toolbox has the shape

    integral of  exp(-rate*s) * s**(mu-1) * g(s)  over a finite interval,

with mu > 0, rate >= 0 and g regular enough to interpolate. The weight is
integrated exactly over each panel (its monomial moments reduce to lower
incomplete gamma values), so only the interpolation of g contributes error:

* ``convolve_product_uniform`` integrates sampled g against the weight on a
  uniform grid with a piecewise-linear interpolant. The panel weights depend
  only on the lag, which turns the whole sweep into two discrete
  convolutions.
* ``quadratic_product_weights`` produces a weight vector for a
  piecewise-quadratic interpolant on an arbitrary (typically graded) mesh,
  for quadratures that must reach ~1e-8. Grading the mesh toward the
  singular endpoint is essential whenever g itself carries a t**alpha cusp
  there, which is the generic situation for Mittag-Leffler kernels.
"""

from __future__ import annotations

import numpy as np

from .errors import GridTooCoarse, InvalidParameter, QuadratureFailure
from .special import lower_gamma

__all__ = [
    "weight_first_moments",
    "uniform_lag_weights",
    "convolve_product_uniform",
    "nonuniform_product_value",
    "graded_nodes",
    "quadratic_product_weights",
]


def _power_antiderivative_diff(m: float, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    # (hi**m - lo**m) / m, written to survive hi ~ lo far from the origin
    out = np.empty_like(hi)
    zero_lo = lo <= 0.0
    out[zero_lo] = hi[zero_lo] ** m / m
    nz = ~zero_lo
    if np.any(nz):
        ratio = np.expm1(m * np.log1p((hi[nz] - lo[nz]) / lo[nz]))
        out[nz] = lo[nz] ** m * ratio / m
    return out


def weight_first_moments(mu: float, rate: float, lo, hi) -> tuple[np.ndarray, np.ndarray]:
    """Moments (m0, m1) of exp(-rate*s)*s**(mu-1) over panels [lo, hi].

    m_k = integral of exp(-rate*s) * s**(mu-1+k) ds; both arrays broadcast
    over the panel arrays.
    """
    if mu <= 0.0:
        raise InvalidParameter(f"weight exponent mu must be > 0, got {mu}")
    if rate < 0.0:
        raise InvalidParameter("rate must be >= 0")
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if rate == 0.0:
        return (
            _power_antiderivative_diff(mu, lo, hi),
            _power_antiderivative_diff(mu + 1.0, lo, hi),
        )
    m0 = (lower_gamma(mu, rate * hi) - lower_gamma(mu, rate * lo)) * rate ** (-mu)
    m1 = (lower_gamma(mu + 1.0, rate * hi) - lower_gamma(mu + 1.0, rate * lo)) * rate ** (-(mu + 1.0))
    return m0, m1


def uniform_lag_weights(mu: float, rate: float, h: float, nlags: int) -> tuple[np.ndarray, np.ndarray]:
    """Panel weights (wA, wB) for the uniform-grid linear product rule.

    For the lag-ell panel [ (ell-1)h, ell*h ] the integral of the weight
    against a linear interpolant with value ``a`` at the far end (s = ell*h)
    and ``b`` at the near end is  wA[ell]*a + wB[ell]*b. Index 0 is unused
    and set to zero so the arrays align with lag indices.
    """
    if h <= 0.0:
        raise InvalidParameter("step h must be > 0")
    lags = np.arange(nlags + 1, dtype=float) * h
    if rate == 0.0:
        g0 = lags**mu / mu
        g1 = lags ** (mu + 1.0) / (mu + 1.0)
    else:
        x = rate * lags
        g0 = lower_gamma(mu, x) * rate ** (-mu)
        g1 = lower_gamma(mu + 1.0, x) * rate ** (-(mu + 1.0))
    m0 = np.diff(g0)  # moment over [ (ell-1)h, ell h ], index ell-1
    m1 = np.diff(g1)
    wa = np.zeros(nlags + 1)
    wb = np.zeros(nlags + 1)
    ell = np.arange(1, nlags + 1, dtype=float)
    wa[1:] = (m1 - (ell - 1.0) * h * m0) / h
    wb[1:] = m0 - wa[1:]
    return wa, wb


def convolve_product_uniform(g: np.ndarray, mu: float, rate: float, h: float) -> np.ndarray:
    """Integrate sampled g against the singular weight up to every grid node.

    g has shape (N+1,) or (N+1, d) on the uniform grid t_j = j*h; the result
    F has the same shape with F[k] approximating the integral over [0, t_k]
    of exp(-rate*(t_k - s)) * (t_k - s)**(mu-1) * g(s). Exact whenever g is
    piecewise linear on the grid.
    """
    g = np.asarray(g, dtype=float)
    squeeze = g.ndim == 1
    if squeeze:
        g = g[:, None]
    npts = g.shape[0]
    if npts < 2:
        raise GridTooCoarse("need at least 2 nodes")
    nlags = npts - 1
    wa, wb = uniform_lag_weights(mu, rate, h, nlags)
    out = np.empty_like(g)
    for col in range(g.shape[1]):
        far = np.convolve(g[:, col], wa)[:npts]
        near = np.convolve(g[1:, col], wb)[:npts]
        out[:, col] = far + near
    out[0] = 0.0
    if not np.all(np.isfinite(out)):
        raise QuadratureFailure("product integration produced non-finite values")
    return out[:, 0] if squeeze else out


def nonuniform_product_value(grid: np.ndarray, g: np.ndarray, mu: float, rate: float, k: int) -> np.ndarray:
    """Single-node product integral on an arbitrary strictly increasing grid.

    Evaluates the same quantity as ``convolve_product_uniform`` at node k
    only; used as the fallback when the grid is not uniform.
    """
    g = np.asarray(g, dtype=float)
    t = grid[k]
    if k == 0:
        return np.zeros(g.shape[1:])
    sig_hi = t - grid[:k]      # far panel ends (larger sigma)
    sig_lo = t - grid[1 : k + 1]
    m0, m1 = weight_first_moments(mu, rate, sig_lo, sig_hi)
    width = sig_hi - sig_lo
    a = g[:k]          # value at the far end of each panel (s = grid[j])
    b = g[1 : k + 1]   # near end
    shape = (m1 - sig_lo * m0) / width
    coef_a = shape
    coef_b = m0 - shape
    return np.tensordot(coef_a, a, axes=(0, 0)) + np.tensordot(coef_b, b, axes=(0, 0))


def graded_nodes(length: float, pairs: int, grading: float = 3.0) -> np.ndarray:
    """Mesh of 2*pairs panels on [0, length], graded toward 0.

    Node i sits at length*(i / (2*pairs))**grading; grading 3 restores full
    order for integrands with a t**alpha cusp at the origin.
    """
    if length <= 0.0:
        raise InvalidParameter("mesh length must be > 0")
    if pairs < 1:
        raise InvalidParameter("need at least one panel pair")
    frac = np.arange(2 * pairs + 1, dtype=float) / (2 * pairs)
    return length * frac**grading


def quadratic_product_weights(nodes: np.ndarray, mu: float, rate: float) -> np.ndarray:
    """Weight vector of the piecewise-quadratic product rule on ``nodes``.

    The mesh must contain an even number of panels; each consecutive node
    triple carries one quadratic interpolant, integrated exactly against
    exp(-rate*s)*s**(mu-1). The returned w satisfies
    integral ~= sum_i w[i]*g(nodes[i]) and is exact for g quadratic per pair.
    """
    nodes = np.asarray(nodes, dtype=float)
    if nodes.size < 3 or nodes.size % 2 == 0:
        raise InvalidParameter("quadratic rule needs an odd number of nodes (even panel count)")
    x0 = nodes[:-2:2]
    x1 = nodes[1::2]
    x2 = nodes[2::2]
    m0, m1 = weight_first_moments(mu, rate, x0, x2)
    # second moments over the same pairs
    if rate == 0.0:
        m2 = _power_antiderivative_diff(mu + 2.0, x0, x2)
    else:
        m2 = (lower_gamma(mu + 2.0, rate * x2) - lower_gamma(mu + 2.0, rate * x0)) * rate ** (-(mu + 2.0))
    # shift moments to the local variable s' = s - x0 to limit cancellation
    mp0 = m0
    mp1 = m1 - x0 * m0
    mp2 = m2 - 2.0 * x0 * m1 + x0 * x0 * m0
    d1 = x1 - x0
    d2 = x2 - x0
    w = np.zeros(nodes.size)
    w0 = (mp2 - (d1 + d2) * mp1 + d1 * d2 * mp0) / (d1 * d2)
    w1 = (mp2 - d2 * mp1) / (d1 * (d1 - d2))
    w2 = (mp2 - d1 * mp1) / (d2 * (d2 - d1))
    np.add.at(w, np.arange(0, nodes.size - 2, 2), w0)
    np.add.at(w, np.arange(1, nodes.size, 2), w1)
    np.add.at(w, np.arange(2, nodes.size, 2), w2)
    if not np.all(np.isfinite(w)):
        raise QuadratureFailure("quadratic product weights are non-finite")
    return w
