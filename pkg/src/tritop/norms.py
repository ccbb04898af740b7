"""p-norms, log-log decay-rate fits and the discrete Young/Hölder inequality checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from tritop.convolution import ConvPlan, Method, conv_full
from tritop.errors import InsufficientDataError, ValidationError
from tritop.sequences import RealSeq, as_seq

__all__ = [
    "PNormValue",
    "DecayFit",
    "HolderExponents",
    "CheckResult",
    "YoungConvolutionResult",
    "SlowDecayWitness",
    "pnorm",
    "estimate_decay_rate",
    "young_product_check",
    "holder_check",
    "generalized_holder_check",
    "young_convolution_check",
    "slow_decay_witness",
]

EXPONENT_TOL = 1e-12
INEQUALITY_SLACK = 1e-10
TINY = 1e-300

inf = math.inf


def _recip(p):
    return 0.0 if p == inf else 1.0 / p


def _check_exponent(p, name="p", allow_inf=True):
    if isinstance(p, bool) or not (p >= 1) or (p == inf and not allow_inf) or math.isnan(p):
        raise ValidationError(f"{name} must be >= 1{' or inf' if allow_inf else ''}, got {p!r}")


@dataclass(frozen=True)
class PNormValue:
    p: float
    value: float
    saturated: bool

    def __float__(self):
        return self.value


def _pnorm_raw(v: np.ndarray, p: float):
    """Norm of an arbitrary float array; returns (value, saturated)."""
    av = np.abs(v)
    big = float(av.max()) if av.size else 0.0
    if big == 0.0:
        return 0.0, False
    if p == inf:
        return big, False
    if p == 1:
        return math.fsum(av), False
    with np.errstate(over="ignore", under="ignore"):
        raw_max = np.float64(big) ** p
        raw_min = av[av > 0].min() ** p
    saturated = not math.isfinite(raw_max) or raw_min == 0.0
    return big * math.fsum((av / big) ** p) ** (1.0 / p), saturated


def pnorm(a, p: float) -> PNormValue:
    """``(sum |a_k|^p)^(1/p)`` over the stored prefix, or ``max |a_k|`` for p = inf.

    The sum is formed on ``a / max|a|`` so neither overflow nor underflow of
    ``|a_k|^p`` can occur; ``saturated`` records that the unscaled sum would
    have left the double range.
    """
    _check_exponent(p)
    value, saturated = _pnorm_raw(np.asarray(as_seq(a)), float(p))
    return PNormValue(float(p), value, saturated)


@dataclass(frozen=True)
class DecayFit:
    """``|s_k| ~ k^-rate`` on ``window``; ``rms_residual`` is in natural-log units."""

    rate: float
    window: tuple
    rms_residual: float
    samples: int
    excluded: int = 0

    @property
    def decades(self):
        return math.log10(self.window[1] / self.window[0])

    def to_dict(self):
        return {
            "rate": self.rate,
            "window": [int(self.window[0]), int(self.window[1])],
            "rms_residual": self.rms_residual if math.isfinite(self.rms_residual) else None,
            "samples": self.samples,
            "excluded": self.excluded,
        }


MIN_FIT_SAMPLES = 8


def estimate_decay_rate(s, window: Optional[tuple] = None, points: int = 64) -> DecayFit:
    """Least-squares slope of ``log|s_k|`` against ``log k`` on geometric samples.

    The default window is ``(ceil(sqrt(n)), n-1)``. Samples with
    ``|s_k| <= 1e-300`` are dropped; if more than 10% are dropped the fit is
    flagged by ``rms_residual = inf``.
    """
    v = np.asarray(as_seq(s))
    n = v.size
    if n < 64:
        raise InsufficientDataError(f"decay fit needs at least 64 entries, got {n}")
    if window is None:
        window = (math.ceil(math.sqrt(n)), n - 1)
    lo, hi = int(window[0]), int(window[1])
    if not (1 <= lo < hi <= n - 1):
        raise ValidationError(f"window must satisfy 1 <= k_lo < k_hi <= n-1, got {window}")
    points = max(points, 32)
    ks = np.unique(np.round(np.geomspace(lo, hi, points)).astype(np.int64))
    vals = np.abs(v[ks])
    usable = vals > TINY
    excluded = int(ks.size - usable.sum())
    if usable.sum() < MIN_FIT_SAMPLES:
        raise InsufficientDataError(f"only {int(usable.sum())} usable samples in window {window}")
    x = np.log(ks[usable].astype(np.float64))
    y = np.log(vals[usable])
    slope, intercept = np.polyfit(x, y, 1)
    rms = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    if excluded > 0.1 * ks.size:
        rms = inf
    return DecayFit(float(-slope), (lo, hi), rms, int(usable.sum()), excluded)


@dataclass(frozen=True)
class HolderExponents:
    """Exponent triple for the product (1/p + 1/q = 1/r) or convolution
    (1 + 1/r = 1/p + 1/q) inequalities; use the constructors."""

    p: float
    q: float
    r: float

    @classmethod
    def product(cls, p, q):
        _check_exponent(p, "p")
        _check_exponent(q, "q")
        s = _recip(p) + _recip(q)
        if s == 0:
            return cls(p, q, inf)
        return cls(p, q, 1.0 / s)

    @classmethod
    def conjugate(cls, p, q):
        ex = cls.product(p, q)
        if abs(_recip(p) + _recip(q) - 1.0) > EXPONENT_TOL:
            raise ValidationError(f"p={p}, q={q} are not conjugate (1/p + 1/q != 1)")
        return cls(p, q, 1.0)

    @classmethod
    def convolution(cls, p, q):
        _check_exponent(p, "p")
        _check_exponent(q, "q")
        s = _recip(p) + _recip(q) - 1.0
        if s < -EXPONENT_TOL:
            raise ValidationError(f"1/p + 1/q < 1 for p={p}, q={q}: no admissible r")
        if s <= EXPONENT_TOL:
            return cls(p, q, inf)
        return cls(p, q, 1.0 / s)


@dataclass(frozen=True)
class CheckResult:
    lhs: float
    rhs: float
    holds: bool

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.holds))


@dataclass(frozen=True)
class YoungConvolutionResult:
    r: float
    lhs: float
    rhs: float
    holds: bool

    def __iter__(self):
        return iter((self.r, self.lhs, self.rhs, self.holds))


def _holds(lhs, rhs, slack):
    return bool(lhs <= rhs + slack * max(1.0, abs(rhs)))


def young_product_check(x: float, y: float, p: float, q: float) -> CheckResult:
    """``xy <= x^p/p + y^q/q`` for conjugate ``p, q > 1`` and ``x, y >= 0``."""
    if x < 0 or y < 0:
        raise ValidationError("x and y must be non-negative")
    if not (p > 1 and q > 1) or abs(1.0 / p + 1.0 / q - 1.0) > EXPONENT_TOL:
        raise ValidationError(f"p={p}, q={q} are not a conjugate pair > 1")
    lhs = x * y
    rhs = x**p / p + y**q / q
    return CheckResult(lhs, rhs, _holds(lhs, rhs, 1e-12))


def holder_check(x, y, exps: HolderExponents) -> CheckResult:
    """``||x y||_1 <= ||x||_p ||y||_q`` for conjugate exponents."""
    x = np.asarray(as_seq(x))
    y = np.asarray(as_seq(y))
    if x.size != y.size:
        raise ValidationError("holder_check: sequences must have equal length")
    HolderExponents.conjugate(exps.p, exps.q)
    lhs = _pnorm_raw(x * y, 1.0)[0]
    rhs = _pnorm_raw(x, exps.p)[0] * _pnorm_raw(y, exps.q)[0]
    return CheckResult(lhs, rhs, _holds(lhs, rhs, INEQUALITY_SLACK))


def generalized_holder_check(xs: Sequence, ps: Sequence[float], r: float) -> CheckResult:
    """``||x_1 ... x_m||_r <= prod ||x_k||_{p_k}`` when ``sum 1/p_k = 1/r``."""
    if len(xs) < 1 or len(xs) != len(ps):
        raise ValidationError("need m >= 1 sequences and one exponent per sequence")
    arrays = [np.asarray(as_seq(x)) for x in xs]
    if len({a.size for a in arrays}) != 1:
        raise ValidationError("generalized_holder_check: sequences must have equal length")
    if not r > 0 or math.isnan(r):
        raise ValidationError("r must be positive")
    for p in ps:
        if not p > 0 or math.isnan(p):
            raise ValidationError("exponents must be positive")
    if abs(sum(_recip(p) for p in ps) - _recip(r)) > EXPONENT_TOL:
        raise ValidationError("exponents violate sum 1/p_k = 1/r")
    prod = np.prod(np.vstack(arrays), axis=0)
    lhs = _quasi_norm(prod, r)
    rhs = math.prod(_quasi_norm(a, p) for a, p in zip(arrays, ps))
    return CheckResult(lhs, rhs, _holds(lhs, rhs, INEQUALITY_SLACK))


def _quasi_norm(v, p):
    # the generalized inequality also admits 0 < p < 1
    if p >= 1:
        return _pnorm_raw(v, p)[0]
    av = np.abs(v)
    big = float(av.max())
    if big == 0.0:
        return 0.0
    return big * math.fsum((av / big) ** p) ** (1.0 / p)


def young_convolution_check(x, y, p: float, q: float) -> YoungConvolutionResult:
    """``||x * y||_r <= ||x||_p ||y||_q`` with ``1 + 1/r = 1/p + 1/q``.

    The convolution is taken in full (all ``len(x)+len(y)-1`` terms) by the
    schoolbook path; ``r = inf`` uses the sup norm directly.
    """
    ex = HolderExponents.convolution(p, q)
    z = np.asarray(conv_full(x, y, ConvPlan(Method.SCHOOLBOOK)))
    lhs = _pnorm_raw(z, ex.r)[0]
    rhs = _pnorm_raw(np.asarray(as_seq(x)), p)[0] * _pnorm_raw(np.asarray(as_seq(y)), q)[0]
    return YoungConvolutionResult(ex.r, lhs, rhs, _holds(lhs, rhs, INEQUALITY_SLACK))


@dataclass(frozen=True)
class SlowDecayWitness:
    """Partial ``||a||_p^p`` and ``||u||_q^q`` over growing prefixes.

    A partial sum is judged divergent when its increment over the last decade
    of prefixes is at least ``GROWTH_RATIO`` times the increment over the
    decade before (a convergent ``k^-s`` tail with ``s > 1`` shrinks that
    ratio to ``10^(1-s)``).
    """

    p: float
    q: float
    prefixes: tuple
    a_partial: tuple
    u_partial: tuple
    a_divergent: bool
    u_divergent: bool

    @property
    def consistent(self):
        return self.a_divergent or self.u_divergent

    def to_dict(self):
        return {
            "p": self.p,
            "q": self.q,
            "prefixes": list(self.prefixes),
            "a_partial": list(self.a_partial),
            "u_partial": list(self.u_partial),
            "a_divergent": self.a_divergent,
            "u_divergent": self.u_divergent,
            "consistent": self.consistent,
        }


GROWTH_RATIO = 0.9


def _divergent(partials):
    if len(partials) < 3:
        return False
    last = partials[-1] - partials[-2]
    prev = partials[-2] - partials[-3]
    return bool(last > 0 and last >= GROWTH_RATIO * prev)


def slow_decay_witness(a, u, p: float, q: float, first_prefix: int = 1000) -> SlowDecayWitness:
    """Show that ``a in l^p`` and ``u in l^q`` cannot both hold when ``1/p + 1/q > 1``.

    Prefix lengths run over powers of ten from ``first_prefix`` up to ``n``
    (``n`` itself is appended when it is not a power of ten).
    """
    _check_exponent(p, "p", allow_inf=False)
    _check_exponent(q, "q", allow_inf=False)
    if not 1.0 / p + 1.0 / q > 1.0:
        raise ValidationError("slow_decay_witness needs 1/p + 1/q > 1")
    av = np.abs(np.asarray(as_seq(a)))
    uv = np.abs(np.asarray(as_seq(u)))
    n = min(av.size, uv.size)
    prefixes = []
    m = first_prefix
    while m <= n:
        prefixes.append(m)
        m *= 10
    if not prefixes or prefixes[-1] != n:
        prefixes.append(n)
    ca = np.cumsum(av[:n] ** p)
    cu = np.cumsum(uv[:n] ** q)
    a_part = tuple(float(ca[m - 1]) for m in prefixes)
    u_part = tuple(float(cu[m - 1]) for m in prefixes)
    return SlowDecayWitness(
        float(p), float(q), tuple(prefixes), a_part, u_part, _divergent(a_part), _divergent(u_part)
    )
