"""One- and two-parameter Mittag-Leffler functions by controlled series summation.

The truncation rule stops at term l only when that term is small relative to
the running partial sum AND the following term is no larger. The second
condition guards the pre-asymptotic hump: for arguments of norm ~10 the terms
z**l / gamma(alpha*l + beta) first grow by several orders of magnitude before
the gamma function wins, and a bare small-term test would fire inside the hump.

The hump also dictates the working precision. Whenever the summed terms peak
far above the result (alternating series, matrices with large negative
spectrum), float64 summation loses the answer to cancellation, so evaluation
transparently reruns in double-double arithmetic with gamma-term ratios
pre-tabulated at high precision. That keeps full accuracy up to argument
norms around 15-20 in the alternating case; series convergence itself is fine
to norms of roughly 50, and beyond either limit the evaluator raises
NonConvergence rather than silently degrading.

All functions are pure and operate on immutable inputs, so they are safe to
call concurrently from any number of threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import ddf
from .errors import InvalidParameter, NonConvergence

__all__ = ["MLConfig", "DEFAULT_ML_CONFIG", "ml_scalar", "ml_matrix", "ml_matrix_scaled"]

# double-pass results are accepted while hump * _NOISE * eps <= rel_tol * |sum|
_NOISE = 4.0
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class MLConfig:
    """Series truncation control: relative tolerance and a hard term cap."""

    rel_tol: float = 1e-14
    max_terms: int = 2000

    def __post_init__(self):
        if not (self.rel_tol > 0.0 and math.isfinite(self.rel_tol)):
            raise InvalidParameter("rel_tol must be finite and > 0")
        if self.max_terms < 1:
            raise InvalidParameter("max_terms must be >= 1")


DEFAULT_ML_CONFIG = MLConfig()


def _check_orders(alpha: float, beta: float) -> None:
    if not (isinstance(alpha, (int, float)) and math.isfinite(alpha) and alpha > 0.0):
        raise InvalidParameter(f"alpha must be finite and > 0, got {alpha}")
    if not (isinstance(beta, (int, float)) and math.isfinite(beta) and beta > 0.0):
        raise InvalidParameter(f"beta must be finite and > 0, got {beta}")


@lru_cache(maxsize=65536)
def _gamma_ratio_dd(alpha: float, beta: float, l: int) -> tuple[float, float]:
    """gamma(alpha*l+beta) / gamma(alpha*(l+1)+beta) as a dd pair."""
    import mpmath as mp

    with mp.workdps(40):
        r = mp.gamma(alpha * l + beta) / mp.gamma(alpha * (l + 1) + beta)
        hi = float(r)
        lo = float(r - hi)
    return hi, lo


@lru_cache(maxsize=4096)
def _recip_gamma_dd(beta: float) -> tuple[float, float]:
    import mpmath as mp

    with mp.workdps(40):
        r = 1 / mp.gamma(beta)
        hi = float(r)
        lo = float(r - hi)
    return hi, lo


def _scalar_series_double(alpha, beta, z, cfg):
    """Plain float64 pass; returns (value, hump, converged)."""
    term = 1.0 / math.gamma(beta)
    total = term
    hump = abs(term)
    for l in range(cfg.max_terms):
        nxt = term * z * math.exp(math.lgamma(alpha * l + beta) - math.lgamma(alpha * (l + 1) + beta))
        if not (math.isfinite(nxt) and math.isfinite(total)):
            return total, math.inf, False
        if abs(term) <= cfg.rel_tol * abs(total) and abs(nxt) <= abs(term):
            return total, hump, True
        total += nxt
        term = nxt
        hump = max(hump, abs(term))
    return total, hump, False


def _scalar_series_dd(alpha, beta, z, cfg):
    th, tl = _recip_gamma_dd(beta)
    sh, sl = th, tl
    hump = abs(th)
    for l in range(cfg.max_terms):
        rh, rl = _gamma_ratio_dd(alpha, beta, l)
        nh, nl = ddf.dd_scale(th, tl, z)
        nh, nl = ddf.dd_mul(nh, nl, rh, rl)
        if not (math.isfinite(nh) and math.isfinite(sh)):
            raise NonConvergence(f"series overflow for E_({alpha},{beta}) at |z|={abs(z):.3g}")
        if abs(th) <= cfg.rel_tol * abs(sh) and abs(nh) <= abs(th):
            if hump * ddf.DD_EPS * _NOISE > cfg.rel_tol * abs(sh):
                raise NonConvergence(
                    f"cancellation in E_({alpha},{beta}) at z={z:.3g} exceeds double-double precision"
                )
            return sh + sl
        sh, sl = ddf.dd_add(sh, sl, nh, nl)
        th, tl = nh, nl
        hump = max(hump, abs(th))
    raise NonConvergence(f"E_({alpha},{beta}) needed more than {cfg.max_terms} terms at z={z:.3g}")


def ml_scalar(alpha: float, beta: float, z: float, cfg: MLConfig | None = None) -> float:
    """Evaluate E_{alpha,beta}(z) = sum_l z**l / gamma(alpha*l + beta).

    The one-parameter function E_alpha is the beta = 1 case.
    """
    _check_orders(alpha, beta)
    z = float(z)
    if not math.isfinite(z):
        raise InvalidParameter("z must be finite")
    cfg = cfg or DEFAULT_ML_CONFIG
    total, hump, ok = _scalar_series_double(alpha, beta, z, cfg)
    if not ok:
        if not math.isfinite(hump):
            raise NonConvergence(f"series overflow for E_({alpha},{beta}) at |z|={abs(z):.3g}")
        raise NonConvergence(f"E_({alpha},{beta}) needed more than {cfg.max_terms} terms at z={z:.3g}")
    if hump * _NOISE * _EPS <= cfg.rel_tol * abs(total):
        return total
    return _scalar_series_dd(alpha, beta, z, cfg)


def _check_square(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidParameter(f"matrix argument must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidParameter("matrix argument must have finite entries")
    return A


def _matrix_series_double(alpha, beta, An, x, cfg):
    """Float64 batched series over scales x; returns (out, hump, sum_norm, converged)."""
    n = An.shape[0]
    k = x.size
    with np.errstate(divide="ignore"):
        logx = np.log(x)

    c0 = 1.0 / math.gamma(beta)
    out = np.repeat(c0 * np.eye(n)[None, :, :], k, axis=0)
    term_norm = np.full(k, c0 * math.sqrt(n))
    sum_norm = term_norm.copy()
    hump = term_norm.copy()
    active = np.ones(k, dtype=bool)

    P = np.eye(n)
    for l in range(cfg.max_terms):
        P = P @ An
        p_norm = float(np.linalg.norm(P))
        with np.errstate(over="ignore", invalid="ignore"):
            coef = np.exp((l + 1) * logx - math.lgamma(alpha * (l + 1) + beta))
        next_norm = coef * p_norm
        if not np.all(np.isfinite(next_norm[active])):
            return out, np.full(k, np.inf), sum_norm, False
        done = active & (term_norm <= cfg.rel_tol * sum_norm) & (next_norm <= term_norm)
        active &= ~done
        if not active.any():
            return out, hump, sum_norm, True
        out[active] += coef[active, None, None] * P
        sum_norm[active] = np.linalg.norm(out[active], axis=(1, 2))
        term_norm[active] = next_norm[active]
        hump[active] = np.maximum(hump[active], next_norm[active])
    return out, hump, sum_norm, False


def _matrix_series_dd(alpha, beta, An, x, cfg):
    n = An.shape[0]
    k = x.size
    gh, gl = _recip_gamma_dd(beta)
    eye = np.eye(n)
    out_h = np.repeat(gh * eye[None, :, :], k, axis=0)
    out_l = np.repeat(gl * eye[None, :, :], k, axis=0)
    # running scalar coefficient x**l / gamma(alpha*l + beta), one per scale
    ch = np.full(k, gh)
    cl = np.full(k, gl)
    term_norm = np.abs(ch) * math.sqrt(n)
    sum_norm = term_norm.copy()
    hump = term_norm.copy()
    active = np.ones(k, dtype=bool)

    Ph = eye.copy()
    Pl = np.zeros_like(eye)
    for l in range(cfg.max_terms):
        # P <- P @ An in dd (An is exact float64 data)
        nh = np.zeros_like(Ph)
        nl = np.zeros_like(Pl)
        for j in range(n):
            ph, pe = ddf.two_prod(Ph[:, j, None], An[None, j, :])
            pe = pe + Pl[:, j, None] * An[None, j, :]
            nh, nl = ddf.dd_add(nh, nl, ph, pe)
        Ph, Pl = nh, nl
        p_norm = float(np.linalg.norm(Ph))

        rh, rl = _gamma_ratio_dd(alpha, beta, l)
        ch, cl = ddf.dd_scale(ch, cl, x)
        ch, cl = ddf.dd_mul(ch, cl, rh, rl)
        next_norm = np.abs(ch) * p_norm
        if not np.all(np.isfinite(next_norm[active])):
            raise NonConvergence("matrix Mittag-Leffler series overflowed")
        done = active & (term_norm <= cfg.rel_tol * sum_norm) & (next_norm <= term_norm)
        active &= ~done
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        th, tl = ddf.dd_mul(ch[idx, None, None], cl[idx, None, None], Ph[None, :, :], Pl[None, :, :])
        oh, ol = ddf.dd_add(out_h[idx], out_l[idx], th, tl)
        out_h[idx] = oh
        out_l[idx] = ol
        sum_norm[idx] = np.linalg.norm(out_h[idx], axis=(1, 2))
        term_norm[idx] = next_norm[idx]
        hump[idx] = np.maximum(hump[idx], next_norm[idx])
    else:
        if active.any():
            raise NonConvergence(
                f"matrix Mittag-Leffler series needed more than {cfg.max_terms} terms "
                f"(largest scaled argument norm {np.max(x):.3g})"
            )
    if np.any(hump * ddf.DD_EPS * _NOISE > cfg.rel_tol * np.maximum(sum_norm, np.finfo(float).tiny)):
        raise NonConvergence("matrix Mittag-Leffler cancellation exceeds double-double precision")
    return out_h + out_l


def ml_matrix_scaled(
    alpha: float,
    beta: float,
    A: np.ndarray,
    scales,
    cfg: MLConfig | None = None,
) -> np.ndarray:
    """Evaluate E_{alpha,beta}(s*A) for a batch of scalar scales s >= 0.

    Returns an array of shape (len(scales), n, n). Sharing the matrix power
    recurrence across the batch is what makes the solver's kernel caches
    cheap; each batch entry still honours the truncation rule individually.
    """
    _check_orders(alpha, beta)
    A = _check_square(A)
    cfg = cfg or DEFAULT_ML_CONFIG
    s = np.asarray(scales, dtype=float)
    if s.ndim != 1:
        raise InvalidParameter("scales must be a 1-d array")
    if not np.all(np.isfinite(s)) or np.any(s < 0.0):
        raise InvalidParameter("scales must be finite and >= 0")

    gscale = max(1.0, float(np.linalg.norm(A)))
    An = A / gscale
    x = s * gscale

    out, hump, sum_norm, ok = _matrix_series_double(alpha, beta, An, x, cfg)
    if ok and np.all(hump * _NOISE * _EPS <= cfg.rel_tol * np.maximum(sum_norm, np.finfo(float).tiny)):
        return out
    if not ok and not np.all(np.isfinite(hump)):
        # genuine overflow in float64 cannot be rescued by dd either
        raise NonConvergence("matrix Mittag-Leffler series overflowed")
    if not ok:
        raise NonConvergence(
            f"matrix Mittag-Leffler series needed more than {cfg.max_terms} terms "
            f"(largest scaled argument norm {np.max(x):.3g})"
        )
    return _matrix_series_dd(alpha, beta, An, x, cfg)


def ml_matrix(alpha: float, beta: float, A: np.ndarray, cfg: MLConfig | None = None) -> np.ndarray:
    """Matrix Mittag-Leffler function E_{alpha,beta}(A) of a square matrix."""
    return ml_matrix_scaled(alpha, beta, A, np.array([1.0]), cfg)[0]
