"""Pure-Python/numpy versions of the compiled kernels.

Dot products split every product exactly (Veltkamp/Dekker) and hand the
2k terms to :func:`math.fsum`, which rounds the exact sum once.
"""

import math

import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1


def _split(x):
    t = _SPLIT * x
    hi = t - (t - x)
    return hi, x - hi


def _two_prod(x, y):
    p = x * y
    xh, xl = _split(x)
    yh, yl = _split(y)
    e = ((xh * yh - p) + xh * yl + xl * yh) + xl * yl
    return p, e


def _exact_dot(x, y):
    p, e = _two_prod(x, y)
    return math.fsum(np.concatenate((p, e)))


def naive_inverse(a, n):
    a = np.ascontiguousarray(a[:n], dtype=np.float64)
    ar = a[::-1].copy()  # ar[n-1-i] == a[i]
    arh, arl = _split(ar)
    b = np.empty(n)
    bh = np.empty(n)
    bl = np.empty(n)
    terms = np.empty(2 * n)
    a0 = a[0]
    b[0] = 1.0 / a0
    bh[:1], bl[:1] = _split(b[:1])
    for k in range(1, n):
        # a_k, a_{k-1}, ..., a_1 against b_0, ..., b_{k-1}
        s = slice(n - 1 - k, n - 1)
        xh, xl = arh[s], arl[s]
        yh, yl = bh[:k], bl[:k]
        p = terms[:k]
        np.multiply(ar[s], b[:k], out=p)
        terms[k:2 * k] = ((xh * yh - p) + xh * yl + xl * yh) + xl * yl
        b[k] = -math.fsum(terms[: 2 * k]) / a0
        bh[k:k + 1], bl[k:k + 1] = _split(b[k:k + 1])
    return b


def prefix_sum(x):
    out = np.empty(len(x))
    s = c = 0.0
    for k, v in enumerate(np.asarray(x, dtype=np.float64).tolist()):
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[k] = s + c
    return out


def conv_at(x, y, ks):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    out = np.zeros(len(ks))
    for i, k in enumerate(np.asarray(ks).tolist()):
        lo = max(0, k - len(y) + 1)
        hi = min(k, len(x) - 1)
        if lo <= hi:
            out[i] = _exact_dot(x[lo:hi + 1], y[k - hi:k - lo + 1][::-1])
    return out


def schoolbook(x, y, m, compensated):
    x = np.asarray(x, dtype=np.float64)[:m]
    y = np.asarray(y, dtype=np.float64)[:m]
    if compensated:
        return conv_at(x, y, np.arange(m, dtype=np.int64))
    z = np.zeros(m)
    full = np.convolve(x, y)[:m]
    z[: full.size] = full
    return z
