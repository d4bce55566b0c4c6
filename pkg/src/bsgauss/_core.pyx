# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels; same signatures and semantics as ``_core_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, sqrt, fabs, lgamma, log, fmin, fmax, M_PI

cnp.import_array()

cdef double PI_M14 = M_PI ** -0.25
cdef double SQRT_2PI = sqrt(2.0 * M_PI)
cdef double LN_BIG = 230.0


def hermite_table(int nmax, x, bint gaussian=True):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t npts = xs.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((nmax + 1, npts))
    cdef double[:, ::1] o = out
    cdef const double[::1] xv = xs
    cdef Py_ssize_t i
    cdef int k
    cdef double xi, prev, cur, nxt, offset, scale
    for i in range(npts):
        xi = xv[i]
        offset = -0.5 * xi * xi if gaussian else 0.0
        prev = 0.0
        cur = PI_M14
        scale = exp(offset)
        o[0, i] = cur * scale
        for k in range(nmax):
            nxt = sqrt(2.0 / (k + 1)) * xi * cur - sqrt(k / (k + 1.0)) * prev
            prev = cur
            cur = nxt
            if fabs(cur) > 1e100:
                cur *= 1e-100
                prev *= 1e-100
                offset += LN_BIG
                scale = exp(offset)
            o[k + 1, i] = cur * scale
    return out


def green_series(x, x1, d, kappa):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef const double[::1] x1v = np.ascontiguousarray(x1, dtype=np.float64).ravel()
    cdef const double[::1] dv = np.ascontiguousarray(d, dtype=np.float64).ravel()
    cdef const double[::1] kv = np.ascontiguousarray(kappa, dtype=np.float64)
    cdef Py_ssize_t npts = xv.shape[0], nmodes = kv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(npts)
    cdef Py_ssize_t i, k
    cdef double a0, a1, an, b0, b1, bn, off, acc, c1, c2, xi, yi
    for i in range(npts):
        xi = xv[i]
        yi = x1v[i]
        # both recurrences share one rescaling offset for the product
        off = -0.5 * (xi * xi + yi * yi)
        a0 = 0.0
        a1 = PI_M14
        b0 = 0.0
        b1 = PI_M14
        acc = a1 * b1 * exp(off - kv[0] * dv[i]) / kv[0]
        for k in range(nmodes - 1):
            c1 = sqrt(2.0 / (k + 1))
            c2 = sqrt(k / (k + 1.0))
            an = c1 * xi * a1 - c2 * a0
            bn = c1 * yi * b1 - c2 * b0
            a0 = a1
            a1 = an
            b0 = b1
            b1 = bn
            if fabs(a1) > 1e100:
                a1 *= 1e-100
                a0 *= 1e-100
                off += LN_BIG
            if fabs(b1) > 1e100:
                b1 *= 1e-100
                b0 *= 1e-100
                off += LN_BIG
            acc += a1 * b1 * exp(off - kv[k + 1] * dv[i]) / kv[k + 1]
        out[i] = acc
    return out


cdef inline double _pair(double c, const double[::1] nodes, const double[::1] weights,
                         double umax, double span) nogil:
    cdef double length = fmin(umax, span / fmax(c, 1e-300))
    cdef double acc = 0.0, u
    cdef Py_ssize_t j
    for j in range(nodes.shape[0]):
        u = length * nodes[j]
        acc += weights[j] * exp(-0.5 * u * u - c * u)
    return SQRT_2PI * length * acc


def y_pair_gl(c, nodes, weights, double umax=9.5, double span=40.0):
    cdef const double[::1] cv = np.ascontiguousarray(np.atleast_1d(c), dtype=np.float64).ravel()
    cdef const double[::1] nv = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(cv.shape[0])
    cdef Py_ssize_t i
    for i in range(cv.shape[0]):
        out[i] = _pair(cv[i], nv, wv, umax, span)
    return out


def trace_rows(double nu0, int m_stop, double band, nodes, weights):
    cdef const double[::1] nv = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m_stop)
    cdef int m, n, w, lo
    cdef double s, logw, km, kn, acc, log2 = log(2.0), lgm
    for m in range(m_stop):
        w = <int>(band * sqrt(m + 1.0)) + 30
        lo = m - w
        if lo < 0:
            lo = 0
        lo += (lo + m) % 2
        km = sqrt(2.0 * (m + nu0))
        lgm = lgamma(m + 1.0)
        acc = 0.0
        n = lo
        while n <= m + w:
            s = 0.5 * (m + n)
            logw = (-log2 + 2.0 * (lgamma(2.0 * s + 1.0) - lgamma(s + 1.0))
                    - 4.0 * s * log2 - lgm - lgamma(n + 1.0))
            kn = sqrt(2.0 * (n + nu0))
            acc += _pair(km + kn, nv, wv, 9.5, 40.0) / (km * kn) * exp(logw)
            n += 2
        out[m] = acc
    return out
