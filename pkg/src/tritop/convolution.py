"""Truncated discrete convolution: schoolbook and real-FFT paths."""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass

import numpy as np
import scipy.fft

from tritop._backend import kernels
from tritop.errors import ValidationError
from tritop.sequences import RealSeq, as_seq

__all__ = ["Method", "ConvPlan", "conv_truncated", "conv_full", "fft_workers", "COMPENSATE_ABOVE"]

COMPENSATE_ABOVE = 10_000


class Method(str, enum.Enum):
    SCHOOLBOOK = "schoolbook"
    FAST_TRANSFORM = "fast_transform"
    AUTO = "auto"


@dataclass(frozen=True)
class ConvPlan:
    """How to evaluate a convolution.

    ``extended`` runs the transform in long double (64-bit mantissa on x86),
    which the Newton inverse needs for relative accuracy in slowly decaying
    tails. It is a no-op on platforms where long double is plain double.
    """

    method: Method = Method.AUTO
    crossover: int = 64
    extended: bool = False

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.crossover < 1:
            raise ValidationError("crossover must be >= 1")


DEFAULT_PLAN = ConvPlan()


def fft_workers():
    try:
        return max(1, int(os.environ.get("TRITOP_THREADS", "1")))
    except ValueError:
        return 1


def _canonical(x, y):
    # fixed operand order makes schoolbook bitwise commutative
    if (x.size, x.tobytes()) > (y.size, y.tobytes()):
        return y, x
    return x, y


def _fft_conv(x, y, m, extended):
    size = 1 << (x.size + y.size - 2).bit_length()
    dtype = np.longdouble if extended else np.float64
    workers = fft_workers()
    fx = scipy.fft.rfft(x.astype(dtype), size, workers=workers)
    fy = scipy.fft.rfft(y.astype(dtype), size, workers=workers)
    z = scipy.fft.irfft(fx * fy, size, workers=workers)[:m]
    out = np.zeros(m)
    out[: z.size] = z
    return out


def _conv(x, y, m, plan):
    x = x[:m]
    y = y[:m]
    method = plan.method
    if method is Method.AUTO:
        method = Method.SCHOOLBOOK if min(x.size, y.size) < plan.crossover else Method.FAST_TRANSFORM
    if method is Method.SCHOOLBOOK:
        x, y = _canonical(x, y)
        compensated = max(x.size, y.size) > COMPENSATE_ABOVE
        return kernels.schoolbook(np.ascontiguousarray(x), np.ascontiguousarray(y), m, compensated)
    return _fft_conv(x, y, m, plan.extended)


def conv_truncated(x, y, m: int, plan: ConvPlan = DEFAULT_PLAN) -> RealSeq:
    """First ``m`` terms of ``z_k = sum_{j<=k} x_j y_{k-j}``."""
    x = np.asarray(as_seq(x))
    y = np.asarray(as_seq(y))
    if m < 1:
        raise ValidationError("m must be >= 1")
    if m > x.size + y.size - 1:
        raise ValidationError(f"m={m} exceeds len(x)+len(y)-1={x.size + y.size - 1}")
    return RealSeq(_conv(x, y, m, plan))


def conv_full(x, y, plan: ConvPlan = DEFAULT_PLAN) -> RealSeq:
    x = as_seq(x)
    y = as_seq(y)
    return conv_truncated(x, y, len(x) + len(y) - 1, plan)
