"""Inverse sequence, fundamental matrix and the identities tying them to ``a``.

All routines work on finite prefixes; because the matrices are triangular the
leading ``n`` entries of every result are exact consequences of the leading
``n`` entries of the input.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from tritop._backend import kernels
from tritop.convolution import ConvPlan, Method, _conv
from tritop.errors import ConvergenceError, SingularMatrixError, ValidationError
from tritop.sequences import RealSeq, as_seq

__all__ = [
    "InverseMethod",
    "InverseResult",
    "FundamentalResult",
    "invert_naive",
    "invert_newton",
    "invert",
    "fundamental",
    "residual_ab",
    "residual_au",
    "verify_uu",
    "log_indices",
    "DEFAULT_SAMPLES",
    "NAIVE_AUTO_LIMIT",
]

DEFAULT_SAMPLES = 64
NAIVE_AUTO_LIMIT = 4096

_NEWTON_PLAN = ConvPlan(Method.AUTO, extended=True)
_CHECK_PLAN = ConvPlan(Method.AUTO)


class InverseMethod(str, enum.Enum):
    NAIVE = "naive"
    NEWTON = "newton"


@dataclass(frozen=True)
class InverseResult:
    b: RealSeq
    method: InverseMethod
    au_residual: float
    normalized: bool

    @property
    def n(self):
        return len(self.b)


@dataclass(frozen=True)
class FundamentalResult:
    u: RealSeq
    d: np.ndarray  # d[j-1] holds d_j = a_{j-1} - a_j, j >= 1


def log_indices(n: int, count: int, start: int = 0) -> np.ndarray:
    """At most ``count`` distinct log-spaced indices in ``[start, n-1]``, both ends included."""
    if n - start <= 0:
        return np.zeros(0, dtype=np.int64)
    if count >= n - start:
        return np.arange(start, n, dtype=np.int64)
    if count < 2:
        return np.array([n - 1], dtype=np.int64)
    lo = start + 1
    idx = np.unique(np.round(np.geomspace(lo, n, count - 1)).astype(np.int64) - 1)
    idx = np.unique(np.concatenate(([start], idx, [n - 1])))
    return idx[(idx >= start) & (idx < n)]


def _prepare(a, n):
    a = np.asarray(as_seq(a))
    if isinstance(n, bool) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    if n > a.size:
        raise ValidationError(f"n={n} exceeds len(a)={a.size}")
    a0 = float(a[0])
    if a0 == 0.0:
        raise SingularMatrixError("a_0 = 0: the triangular Toeplitz matrix is singular")
    normalized = a0 != 1.0
    an = np.ascontiguousarray(a[:n] / a0 if normalized else a[:n])
    return a, a0, an, normalized


def _finish(bn, a, a0, normalized, method, samples):
    b = bn / a0 if normalized else bn
    b = b + 0.0  # drop signed zeros
    b[0] = 1.0 / a0
    u = kernels.prefix_sum(b)
    au = _max_dev(a[: b.size], u, log_indices(b.size, samples), 1.0)
    return InverseResult(RealSeq(b), method, au, normalized)


def invert_naive(a, n: int, samples: int = DEFAULT_SAMPLES) -> InverseResult:
    """Evaluate ``b_k = -(1/a_0) sum_{j<k} a_{k-j} b_j`` term by term.

    Each dot product is compensated (error-free products plus compensated
    summation), so ``b_k`` carries a relative error of a few ulps even where the
    sum cancels down to a tiny tail value.
    """
    a, a0, an, normalized = _prepare(a, n)
    bn = kernels.naive_inverse(an, n)
    return _finish(bn, a, a0, normalized, InverseMethod.NAIVE, samples)


def invert_newton(a, n: int, tol: float | None = None, samples: int = DEFAULT_SAMPLES) -> InverseResult:
    """Power-series reciprocal by Newton doubling, O(n log n).

    Uses the update ``b <- b (2e - a b)`` in the form that only rewrites the new
    upper half, ``b[m:2m] = -(b[:m] * (a b)[m:2m])[:m]``. Convolutions of
    length >= 64 run through a long-double FFT.
    """
    if tol is None:
        tol = 1e-9 * math.sqrt(n)
    if not tol > 0:
        raise ValidationError("tol must be > 0")
    a, a0, an, normalized = _prepare(a, n)

    size = 1 << (n - 1).bit_length()
    apad = np.zeros(size)
    apad[:n] = an
    b = np.zeros(size)
    b[0] = 1.0
    m = 1
    while m < size:
        r = _conv(apad[: 2 * m], b[:m], 2 * m, _NEWTON_PLAN)[m:]
        b[m : 2 * m] = -_conv(b[:m], r, m, _NEWTON_PLAN)
        m *= 2
    bn = b[:n]

    check = _conv(an, bn, n, _CHECK_PLAN)
    check[0] -= 1.0
    residual = float(np.max(np.abs(check)))
    if not residual <= tol:
        raise ConvergenceError(
            f"Newton inverse residual {residual:.3e} exceeds tol {tol:.3e}", residual
        )
    return _finish(bn, a, a0, normalized, InverseMethod.NEWTON, samples)


def invert(a, n: int, method: str = "auto", tol: float | None = None, samples: int = DEFAULT_SAMPLES) -> InverseResult:
    """Dispatch on ``method``; ``auto`` uses the naive recurrence up to n = 4096."""
    if method == "auto":
        method = "naive" if n <= NAIVE_AUTO_LIMIT else "newton"
    method = InverseMethod(method)
    if method is InverseMethod.NAIVE:
        return invert_naive(a, n, samples=samples)
    return invert_newton(a, n, tol=tol, samples=samples)


def fundamental(a, b) -> FundamentalResult:
    """``u_k = sum_{j<=k} b_j`` and ``d_k = a_{k-1} - a_k``."""
    a = np.asarray(as_seq(a))
    b = np.asarray(as_seq(b))
    if b.size > a.size:
        raise ValidationError("len(b) must not exceed len(a)")
    u = kernels.prefix_sum(np.ascontiguousarray(b))
    d = a[:-1] - a[1:]
    d.setflags(write=False)
    return FundamentalResult(RealSeq(u), d)


def _max_dev(x, y, ks, target):
    if ks.size == 0:
        return 0.0
    z = kernels.conv_at(np.ascontiguousarray(x, dtype=np.float64), np.ascontiguousarray(y, dtype=np.float64), ks)
    return float(np.max(np.abs(z - target)))


def residual_ab(a, b, samples: int = DEFAULT_SAMPLES) -> float:
    """max |sum_{j<=k} a_j b_{k-j}| over log-sampled k >= 1 (k = 1 and n-1 always)."""
    a = np.asarray(as_seq(a))
    b = np.asarray(as_seq(b))
    if a.size != b.size:
        raise ValidationError("len(a) must equal len(b)")
    return _max_dev(a, b, log_indices(a.size, samples, start=1), 0.0)


def residual_au(a, u, samples: int = DEFAULT_SAMPLES) -> float:
    """max |sum_{j<=k} a_j u_{k-j} - 1| over log-sampled k >= 0."""
    a = np.asarray(as_seq(a))
    u = np.asarray(as_seq(u))
    if a.size != u.size:
        raise ValidationError("len(a) must equal len(u)")
    return _max_dev(a, u, log_indices(a.size, samples), 1.0)


def verify_uu(u, d, samples: int = DEFAULT_SAMPLES) -> float:
    """max |u_k - sum_{j=1}^k u_{k-j} d_j| over log-sampled k >= 1.

    ``d`` is stored from index 1, i.e. ``d[0]`` is ``d_1``.
    """
    u = np.asarray(as_seq(u))
    d = np.asarray(d, dtype=np.float64).reshape(-1)
    if d.size < u.size - 1:
        raise ValidationError("len(d) must be >= len(u) - 1")
    ks = log_indices(u.size, samples, start=1)
    if ks.size == 0:
        return 0.0
    z = kernels.conv_at(np.ascontiguousarray(d), np.ascontiguousarray(u), ks - 1)
    return float(np.max(np.abs(u[ks] - z)))
