"""Sequence container, generators for the test families and structural classifiers."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from tritop.errors import InsufficientDataError, ValidationError

__all__ = [
    "RealSeq",
    "as_seq",
    "Kind",
    "GeneratorSpec",
    "Decay",
    "DecaySource",
    "SeqClass",
    "generate",
    "classify",
]


@dataclass(frozen=True, eq=False)
class RealSeq:
    """Finite prefix ``values[0..n-1]`` of a real sequence.

    The array is copied to float64 and frozen on construction; ``np.asarray``
    on a ``RealSeq`` returns that read-only view.
    """

    values: np.ndarray
    offset: int = 0

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if v.size < 1:
            raise ValidationError("sequence must have at least one element")
        if not np.all(np.isfinite(v)):
            raise ValidationError("sequence contains NaN or Inf")
        if self.offset != 0:
            raise ValidationError("only offset 0 is supported")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    def __getitem__(self, item):
        return self.values[item]

    def __iter__(self):
        return iter(self.values)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.values
        return self.values.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, RealSeq):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(np.all(self.values == other.values))

    def __repr__(self):
        return f"RealSeq(n={len(self)}, values={np.array2string(self.values, threshold=8)})"

    def tolist(self):
        return self.values.tolist()


def as_seq(x) -> RealSeq:
    return x if isinstance(x, RealSeq) else RealSeq(x)


class Kind(str, enum.Enum):
    POWER_LAW = "power_law"
    LITERAL = "literal"
    CONSTANT = "constant"
    JAFFARD = "jaffard"


@dataclass(frozen=True)
class GeneratorSpec:
    """How a sequence is produced; lets :func:`classify` decide decay exactly."""

    kind: Kind
    n: int
    alpha: Optional[float] = None
    c: Optional[float] = None
    values: Optional[tuple] = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.LITERAL:
            if self.values is None:
                raise ValidationError("literal generator needs values")
            object.__setattr__(self, "values", tuple(float(v) for v in self.values))
            if self.n != len(self.values):
                raise ValidationError("literal generator: n must equal len(values)")
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool) or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n!r}")
        if self.kind is Kind.POWER_LAW:
            if self.alpha is None or not math.isfinite(self.alpha) or self.alpha < 0:
                raise ValidationError(f"power-law alpha must be finite and >= 0, got {self.alpha!r}")
        if self.kind is Kind.CONSTANT:
            if self.c is None or not math.isfinite(self.c):
                raise ValidationError("constant generator needs a finite c")

    @classmethod
    def power_law(cls, alpha, n):
        return cls(Kind.POWER_LAW, n, alpha=alpha)

    @classmethod
    def constant(cls, c, n):
        return cls(Kind.CONSTANT, n, c=c)

    @classmethod
    def jaffard(cls, n):
        return cls(Kind.JAFFARD, n)

    @classmethod
    def literal(cls, values):
        values = tuple(values)
        return cls(Kind.LITERAL, len(values), values=values)

    def to_dict(self):
        d = {"kind": self.kind.value, "n": int(self.n)}
        if self.alpha is not None:
            d["alpha"] = self.alpha
        if self.c is not None:
            d["c"] = self.c
        return d


def generate(spec: GeneratorSpec) -> RealSeq:
    n = spec.n
    if spec.kind is Kind.POWER_LAW:
        if spec.alpha == 0:
            return RealSeq(np.ones(n))
        return RealSeq((1.0 + np.arange(n, dtype=np.float64)) ** -float(spec.alpha))
    if spec.kind is Kind.CONSTANT:
        return RealSeq(np.full(n, float(spec.c)))
    if spec.kind is Kind.JAFFARD:
        v = np.zeros(n)
        v[:2] = 1.0
        return RealSeq(v)
    return RealSeq(np.asarray(spec.values, dtype=np.float64))


class Decay(str, enum.Enum):
    FAST = "fast"
    SLOW = "slow"
    STAGNATION = "stagnation"
    UNKNOWN = "unknown"


class DecaySource(str, enum.Enum):
    SYMBOLIC = "symbolic"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class SeqClass:
    monotone_nonincreasing: bool
    strictly_at_1: bool
    log_convex: bool
    decay: Decay
    decay_source: DecaySource

    @property
    def slow_monotone(self):
        """Hypotheses of the u_k -> 0 result (a_0 > a_1 is not required)."""
        return self.monotone_nonincreasing and self.decay is Decay.SLOW

    def to_dict(self):
        return {
            "monotone_nonincreasing": self.monotone_nonincreasing,
            "strictly_at_1": self.strictly_at_1,
            "log_convex": self.log_convex,
            "decay": self.decay.value,
            "decay_source": self.decay_source.value,
        }


def _symbolic_decay(spec: GeneratorSpec) -> Optional[Decay]:
    if spec.kind is Kind.POWER_LAW:
        if spec.alpha == 0:
            return Decay.STAGNATION
        return Decay.FAST if spec.alpha > 1 else Decay.SLOW
    if spec.kind is Kind.CONSTANT:
        return Decay.FAST if spec.c == 0 else Decay.STAGNATION
    if spec.kind is Kind.JAFFARD:
        return Decay.FAST
    return None


def _empirical_decay(v: np.ndarray, tol: float) -> Decay:
    n = v.size
    tail = v[n - max(1, n // 10):]
    if np.ptp(tail) < tol and tail.mean() > tol:
        return Decay.STAGNATION
    # deferred import: norms imports this module
    from tritop.norms import estimate_decay_rate

    try:
        fit = estimate_decay_rate(np.abs(v))
    except InsufficientDataError:
        return Decay.UNKNOWN
    if not math.isfinite(fit.rms_residual) or fit.rate <= 0:
        return Decay.UNKNOWN
    return Decay.SLOW if fit.rate <= 1 else Decay.FAST


def classify(a, spec: Optional[GeneratorSpec] = None, tol: Optional[float] = None) -> SeqClass:
    """Structural flags of ``a``; decay comes from ``spec`` when one is given.

    ``tol`` defaults to ``1e-12 * max|a_k|`` and only absorbs rounding.
    """
    v = np.asarray(as_seq(a))
    if tol is None:
        tol = 1e-12 * float(np.max(np.abs(v)))
    if tol < 0:
        raise ValidationError("tol must be >= 0")

    monotone = bool(np.all(v[:-1] >= v[1:] - tol))
    strict1 = bool(v.size >= 2 and v[0] > v[1])
    # relative slack: rounding in a_k^2 scales with a_k^2, and an absolute one
    # would accept [1, tiny, 0] and break positivity of log-convex sequences
    scale = float(np.max(np.abs(v)))
    rtol = tol / scale if scale > 0 else 0.0
    sq = v[1:-1] ** 2
    log_convex = bool(np.all(v >= 0)) and bool(np.all(sq <= v[:-2] * v[2:] + rtol * sq))

    decay = _symbolic_decay(spec) if spec is not None else None
    if decay is not None:
        source = DecaySource.SYMBOLIC
    else:
        decay, source = _empirical_decay(v, tol), DecaySource.EMPIRICAL
    return SeqClass(monotone, strict1, log_convex, decay, source)
