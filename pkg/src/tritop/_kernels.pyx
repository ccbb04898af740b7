# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Signatures mirror :mod:`tritop._fallback`.

Dot products use TwoProduct (fma) + TwoSum, i.e. they are evaluated as if in
twice the working precision before a single final rounding.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fma

cnp.import_array()


cdef inline double _dot2_rev(const double* x, const double* y, Py_ssize_t k, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    # sum_{j=lo}^{hi} x[k-j] * y[j], compensated
    cdef double s = 0.0, c = 0.0, p, e, t, z
    cdef Py_ssize_t j
    for j in range(lo, hi + 1):
        p = x[k - j] * y[j]
        e = fma(x[k - j], y[j], -p)
        t = s + p
        z = t - s
        c += (s - (t - z)) + (p - z) + e
        s = t
    return s + c


def naive_inverse(const double[::1] a, Py_ssize_t n):
    """b_0 = 1/a_0, b_k = -(1/a_0) sum_{j<k} a_{k-j} b_j."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double[::1] b = out
    cdef double a0 = a[0]
    cdef Py_ssize_t k
    with nogil:
        b[0] = 1.0 / a0
        for k in range(1, n):
            b[k] = -_dot2_rev(&a[0], &b[0], k, 0, k - 1) / a0
    return out


def prefix_sum(const double[::1] x):
    """Running sum with Neumaier compensation."""
    cdef Py_ssize_t n = x.shape[0], k
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double[::1] u = out
    cdef double s = 0.0, c = 0.0, t, v
    with nogil:
        for k in range(n):
            v = x[k]
            t = s + v
            if abs(s) >= abs(v):
                c += (s - t) + v
            else:
                c += (v - t) + s
            s = t
            u[k] = s + c
    return out


def schoolbook(const double[::1] x, const double[::1] y, Py_ssize_t m, bint compensated):
    """z_k = sum_j x_j y_{k-j} for k < m; out-of-range terms are zero."""
    cdef Py_ssize_t nx = x.shape[0], ny = y.shape[0], k, j, lo, hi
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(m, dtype=np.float64)
    cdef double[::1] z = out
    cdef double s
    with nogil:
        for k in range(m):
            lo = k - ny + 1 if k - ny + 1 > 0 else 0
            hi = k if k < nx - 1 else nx - 1
            if lo > hi:
                continue
            if compensated:
                z[k] = _dot2_rev(&y[0], &x[0], k, lo, hi)
            else:
                s = 0.0
                for j in range(lo, hi + 1):
                    s += x[j] * y[k - j]
                z[k] = s
    return out


def conv_at(const double[::1] x, const double[::1] y, const cnp.int64_t[::1] ks):
    """Compensated z_k = sum_j x_j y_{k-j} at the requested indices only."""
    cdef Py_ssize_t nx = x.shape[0], ny = y.shape[0], i, k, lo, hi
    cdef Py_ssize_t nk = ks.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(nk, dtype=np.float64)
    cdef double[::1] z = out
    with nogil:
        for i in range(nk):
            k = ks[i]
            lo = k - ny + 1 if k - ny + 1 > 0 else 0
            hi = k if k < nx - 1 else nx - 1
            if lo <= hi:
                z[i] = _dot2_rev(&y[0], &x[0], k, lo, hi)
    return out
