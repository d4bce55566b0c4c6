"""Pure-numpy implementations of the hot kernels.

Mirrors the compiled ``_core`` extension function for function; the
backend module picks one of the two at import time.
"""
import math

import numpy as np
from scipy.special import gammaln

_PI_M14 = math.pi ** -0.25
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LN_BIG = 230.0  # rescale threshold, e**230 ~ 1e100


def hermite_table(nmax, x, gaussian=True):
    """Rows k = 0..nmax of phi_k(x) (or of its polynomial factor).

    The recurrence runs on the normalized polynomial factor with dynamic
    rescaling, so neither the Gaussian nor the polynomial under/overflows.
    """
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    out = np.empty((nmax + 1, x.size))
    offset = -0.5 * x * x if gaussian else np.zeros_like(x)
    prev = np.zeros_like(x)
    cur = np.full_like(x, _PI_M14)
    out[0] = cur * np.exp(offset)
    for k in range(nmax):
        nxt = math.sqrt(2.0 / (k + 1)) * x * cur - math.sqrt(k / (k + 1.0)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > 1e100
        if big.any():
            cur = np.where(big, cur * 1e-100, cur)
            prev = np.where(big, prev * 1e-100, prev)
            offset = np.where(big, offset + _LN_BIG, offset)
        out[k + 1] = cur * np.exp(offset)
    return out


def green_series(x, x1, d, kappa):
    """sum_n phi_n(x) phi_n(x1) exp(-kappa_n d) / kappa_n, elementwise."""
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    x1 = np.ascontiguousarray(x1, dtype=np.float64).ravel()
    d = np.ascontiguousarray(d, dtype=np.float64).ravel()
    kappa = np.asarray(kappa, dtype=np.float64)
    nmax = kappa.size - 1
    a = hermite_table(nmax, x)
    b = hermite_table(nmax, x1)
    decay = np.exp(-np.outer(kappa, d)) / kappa[:, None]
    return np.sum(a * b * decay, axis=0)


def y_pair_gl(c, nodes, weights, umax=9.5, span=40.0):
    """Kink-split Gauss-Legendre value of the double Gaussian integral.

    Computes int int exp(-y^2 - c|y-y'| - y'^2) dy dy' after rotating to
    u = y - y'; the Gaussian in y + y' integrates exactly and the kink sits
    at the endpoint u = 0 of the remaining half-line integral.
    """
    c = np.atleast_1d(np.asarray(c, dtype=np.float64))
    length = np.minimum(umax, span / np.maximum(c, 1e-300))
    u = np.outer(length, nodes)
    vals = np.exp(-0.5 * u * u - c[:, None] * u) @ weights
    return _SQRT_2PI * length * vals


def trace_rows(nu0, m_stop, band, nodes, weights):
    """Full row sums r(m) = sum_n f(m, n) W(m, n) for m < m_stop.

    f(m, n) = I(k_m + k_n) / (k_m k_n) with k_j = sqrt(2 (j + nu0)) and
    W(m, n) the squared Gaussian overlap of oscillator states m and n.
    W decays like exp(-(m-n)^2 / (2(m+n))) away from the diagonal, so each
    row is summed over the band |m - n| <= band * sqrt(m + 1) + 30.
    """
    out = np.empty(m_stop)
    log2 = math.log(2.0)
    for m in range(m_stop):
        w = int(band * math.sqrt(m + 1.0)) + 30
        lo = max(0, m - w)
        lo += (lo + m) % 2
        n = np.arange(lo, m + w + 1, 2)
        s = 0.5 * (m + n)
        logw = (-log2 + 2.0 * (gammaln(2.0 * s + 1.0) - gammaln(s + 1.0))
                - 4.0 * s * log2 - gammaln(m + 1.0) - gammaln(n + 1.0))
        km = math.sqrt(2.0 * (m + nu0))
        kn = np.sqrt(2.0 * (n + nu0))
        pair = y_pair_gl(km + kn, nodes, weights)
        out[m] = np.sum(pair / (km * kn) * np.exp(logw))
    return out
