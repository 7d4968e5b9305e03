"""Normal and noncentral chi-squared distribution functions."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import erfc, gammainc, gammaln

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)

# Acklam's rational approximation to the normal quantile.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _scalar_out(x, out):
    return float(out) if np.ndim(x) == 0 else out


def normal_cdf(x):
    """Standard normal CDF, computed from ``erfc`` for tail accuracy."""
    xa = np.asarray(x, dtype=float)
    return _scalar_out(x, 0.5 * erfc(-xa / _SQRT2))


def normal_sf(x):
    """Standard normal survival function ``1 - Phi(x)``."""
    xa = np.asarray(x, dtype=float)
    return _scalar_out(x, 0.5 * erfc(xa / _SQRT2))


def normal_pdf(x):
    xa = np.asarray(x, dtype=float)
    return _scalar_out(x, np.exp(-0.5 * xa * xa) / _SQRT2PI)


def _horner(coeffs, x):
    acc = np.zeros_like(x) + coeffs[0]
    for c in coeffs[1:]:
        acc = acc * x + c
    return acc


def normal_cdf_inv(u):
    """Standard normal quantile for ``u`` in the open interval (0, 1).

    A rational first guess is refined by one Halley step, which gives
    close to full double precision over the whole range.

    Raises
    ------
    ValueError
        If any `u` lies outside (0, 1).
    """
    ua = np.asarray(u, dtype=float)
    if not np.all((ua > 0.0) & (ua < 1.0)):
        raise ValueError("normal_cdf_inv requires 0 < u < 1")
    x = np.empty_like(ua)
    lo = ua < _P_LOW
    hi = ua > 1.0 - _P_LOW
    mid = ~(lo | hi)
    if np.any(mid):
        q = ua[mid] - 0.5
        r = q * q
        x[mid] = q * _horner(_A, r) / (_horner(_B, r) * r + 1.0)
    if np.any(lo):
        q = np.sqrt(-2.0 * np.log(ua[lo]))
        x[lo] = _horner(_C, q) / (_horner(_D, q) * q + 1.0)
    if np.any(hi):
        q = np.sqrt(-2.0 * np.log1p(-ua[hi]))
        x[hi] = -_horner(_C, q) / (_horner(_D, q) * q + 1.0)

    # Halley step; the residual is formed on the side of 0.5 where it is exact.
    upper = ua > 0.5
    tail = 0.5 * erfc(np.abs(x) / _SQRT2)
    e = np.where(upper, (1.0 - ua) - tail, tail - ua)
    t = e * _SQRT2PI * np.exp(0.5 * x * x)
    x = x - t / (1.0 + 0.5 * x * t)
    return _scalar_out(u, x)


@lru_cache(maxsize=256)
def _poisson_window(half_lam: float):
    """Indices and Poisson(half_lam) weights covering 15 standard deviations of the mode.

    The window is wider than the Poisson mass alone needs so that densities
    several standard deviations into the tails keep their relative accuracy.
    """
    if half_lam == 0.0:
        return np.zeros(1), np.ones(1)
    mode = math.floor(half_lam)
    span = int(15.0 * math.sqrt(half_lam) + 60.0)
    j = np.arange(max(0, mode - span), mode + span + 1, dtype=float)
    w = np.exp(j * math.log(half_lam) - half_lam - gammaln(j + 1.0))
    return j, w


def _check_ncx2(q, lam):
    if not q > 0:
        raise ValueError(f"degrees of freedom must be positive, got {q}")
    if not lam >= 0:
        raise ValueError(f"noncentrality must be non-negative, got {lam}")


def noncentral_chi2_cdf(x, q: float, lam: float):
    """CDF of the noncentral chi-squared law with `q` degrees of freedom.

    Evaluated as a Poisson mixture of central chi-squared CDFs, with the
    mixture truncated to a window around its mode.
    """
    _check_ncx2(q, lam)
    xa = np.asarray(x, dtype=float)
    j, w = _poisson_window(0.5 * float(lam))
    pos = np.clip(xa, 0.0, None)
    terms = gammainc(0.5 * q + j, 0.5 * pos[..., None])
    out = np.where(xa > 0.0, terms @ w, 0.0)
    return _scalar_out(x, np.clip(out, 0.0, 1.0))


def noncentral_chi2_pdf(x, q: float, lam: float):
    """Density of the noncentral chi-squared law, as a Poisson mixture."""
    _check_ncx2(q, lam)
    xa = np.asarray(x, dtype=float)
    j, w = _poisson_window(0.5 * float(lam))
    pos = np.where(xa > 0.0, xa, 1.0)[..., None]
    k = 0.5 * q + j
    logf = (k - 1.0) * np.log(pos) - 0.5 * pos - k * math.log(2.0) - gammaln(k)
    out = np.where(xa > 0.0, np.exp(logf) @ w, 0.0)
    return _scalar_out(x, out)


def noncentral_chi2_ppf(u, q: float, lam: float, xtol: float = 1e-12):
    """Quantile of the noncentral chi-squared law by bisection on the CDF."""
    _check_ncx2(q, lam)
    ua = np.atleast_1d(np.asarray(u, dtype=float))
    if not np.all((ua > 0.0) & (ua < 1.0)):
        raise ValueError("quantile level must lie in (0, 1)")
    mean = q + lam
    sd = math.sqrt(2.0 * (q + 2.0 * lam))
    lo = np.zeros_like(ua)
    hi = np.full_like(ua, mean + 20.0 * sd)
    while np.any(noncentral_chi2_cdf(hi, q, lam) < ua):
        hi *= 2.0
    while np.max(hi - lo) > xtol * max(1.0, mean):
        mid = 0.5 * (lo + hi)
        below = noncentral_chi2_cdf(mid, q, lam) < ua
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    out = 0.5 * (lo + hi)
    return float(out[0]) if np.ndim(u) == 0 else out.reshape(np.shape(u))
