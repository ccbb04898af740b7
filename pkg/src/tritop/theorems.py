"""Executable checks of the structural results on inverse and fundamental sequences.

Every validator returns a :class:`TheoremReport`. ``passed`` is ``True`` or
``False`` when the check ran, and ``None`` when the hypotheses are not met and
the validator declines to judge (so an unmet hypothesis never shows up as a
green result). Limit statements (``u_k -> 0``, ``b_k -> 0``) are replaced by a
falsifiable finite-data proxy on decade maxima; reports say so in
``params["proxy"]``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from tritop.errors import InsufficientDataError, ValidationError
from tritop.norms import DecayFit, estimate_decay_rate
from tritop.sequences import Decay, GeneratorSpec, SeqClass, as_seq, classify, generate

__all__ = [
    "TheoremId",
    "TheoremReport",
    "check_stmt2",
    "check_thm1",
    "check_cor_b_decay",
    "check_thm_decay_rate",
    "check_thm4",
    "check_thm_final",
    "run_suite",
    "RATE_SLACK",
]

RATE_SLACK = 0.05
MAX_WITNESSES = 10
DECADE_PROXY = "decade maxima strictly decreasing and last < 0.5 * first (finite-data proxy for a limit of 0)"


class TheoremId(str, enum.Enum):
    STMT2_BOUNDS = "Stmt2_Bounds"
    THM1_FUNDAMENTAL_DECAY = "Thm1_FundamentalDecay"
    COR_INVERSE_DECAY = "Cor_InverseDecay"
    THM_DECAY_RATE = "Thm_DecayRate"
    THM4_SIGNS = "Thm4_Signs"
    THM_FINAL_NORM_TWO = "ThmFinal_NormTwo"


@dataclass(frozen=True)
class TheoremReport:
    theorem_id: TheoremId
    passed: Optional[bool]
    witnesses: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    @property
    def applicable(self):
        return self.passed is not None

    @property
    def status(self):
        return {True: "passed", False: "failed", None: "not-applicable"}[self.passed]

    def to_dict(self):
        return {
            "theorem_id": self.theorem_id.value,
            "passed": self.passed,
            "status": self.status,
            "params": _jsonable(self.params),
            "witnesses": [[int(k), _num(v)] for k, v in self.witnesses],
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _num(v):
    v = float(v)
    return v if math.isfinite(v) else None


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    return obj


def _worst(idx, vals, key):
    order = np.argsort(key)[::-1][:MAX_WITNESSES]
    return [(int(idx[i]), float(vals[i])) for i in order]


def check_stmt2(u, tol: float = 1e-10) -> TheoremReport:
    """All ``u_k`` in ``[-tol, 1 + tol]`` (monotone nonincreasing, nonnegative ``a``)."""
    v = np.asarray(as_seq(u))
    excess = np.maximum(-tol - v, v - 1.0 - tol)
    bad = np.flatnonzero(excess > 0)
    params = {"tol": tol, "n": v.size, "min": float(v.min()), "max": float(v.max())}
    if bad.size:
        return TheoremReport(TheoremId.STMT2_BOUNDS, False, _worst(bad, v[bad], excess[bad]), params)
    lo, hi = int(np.argmin(v)), int(np.argmax(v))
    return TheoremReport(TheoremId.STMT2_BOUNDS, True, [(lo, v[lo]), (hi, v[hi])], params)


def _decade_maxima(v, start=1):
    """(argmax, max) of ``v`` over each full decade ``[10^d, 10^(d+1))``."""
    out = []
    d = 0
    while 10 ** (d + 1) <= v.size:
        lo, hi = max(10**d, start), 10 ** (d + 1)
        i = lo + int(np.argmax(v[lo:hi]))
        out.append((i, float(v[i])))
        d += 1
    return out


def _decade_proxy(theorem_id, v, params):
    maxima = _decade_maxima(v)
    if len(maxima) < 3:
        raise InsufficientDataError(f"decade proxy needs 3 full decades, got {len(maxima)} (n={v.size})")
    params = dict(params, proxy=DECADE_PROXY, decade_maxima=[m for _, m in maxima])
    bad = [maxima[d] for d in range(1, len(maxima)) if not maxima[d][1] < maxima[d - 1][1]]
    first, last = maxima[0][1], maxima[-1][1]
    if not last < 0.5 * first:
        bad.append(maxima[-1])
    if bad:
        return TheoremReport(theorem_id, False, bad, params)
    return TheoremReport(theorem_id, True, maxima, params)


def _hypotheses(seq_class: Optional[SeqClass]):
    if seq_class is None:
        return {"hypotheses": "asserted by caller"}, True
    met = seq_class.slow_monotone
    return {
        "hypotheses_met": met,
        "monotone_nonincreasing": seq_class.monotone_nonincreasing,
        "decay": seq_class.decay.value,
        "a0_gt_a1": seq_class.strictly_at_1,
    }, met


def check_thm1(u, seq_class: Optional[SeqClass] = None) -> TheoremReport:
    """``u_k -> 0`` for monotone, slowly decaying ``a`` (decade-maxima proxy).

    Strictness ``a_0 > a_1`` is recorded but not required.
    """
    v = np.asarray(as_seq(u))
    params, met = _hypotheses(seq_class)
    params["n"] = v.size
    if not met:
        return TheoremReport(TheoremId.THM1_FUNDAMENTAL_DECAY, None, [], params)
    return _decade_proxy(TheoremId.THM1_FUNDAMENTAL_DECAY, v, params)


def check_cor_b_decay(b, seq_class: Optional[SeqClass] = None) -> TheoremReport:
    """``b_k -> 0`` (decade-maxima proxy on ``|b_k|``, k >= 1).

    Unlike :func:`check_thm1` the proxy is evaluated even when the hypotheses
    fail: a violation is then reported as a failure with
    ``hypotheses_met = False``, while a pass is downgraded to not-applicable.
    """
    v = np.abs(np.asarray(as_seq(b)))
    params, met = _hypotheses(seq_class)
    params["n"] = v.size
    report = _decade_proxy(TheoremId.COR_INVERSE_DECAY, v, params)
    if not met and report.passed:
        return TheoremReport(report.theorem_id, None, [], report.params)
    return report


def check_thm_decay_rate(u_fit: DecayFit, alpha: float, slack: float = RATE_SLACK) -> TheoremReport:
    """Fitted decay of ``u`` at most ``1 - alpha`` (plus ``slack`` for the finite fit).

    The two-sided agreement with ``1 - alpha`` is reported in ``params`` as an
    observation only.
    """
    if not 0 < alpha <= 1:
        raise ValidationError(f"alpha must lie in (0, 1], got {alpha}")
    bound = 1.0 - alpha
    params = {
        "alpha": alpha,
        "measured_rate": u_fit.rate,
        "bound": bound,
        "slack": slack,
        "window": list(u_fit.window),
        "observed_equality": abs(u_fit.rate - bound) <= slack,
    }
    ok = u_fit.rate <= bound + slack
    return TheoremReport(TheoremId.THM_DECAY_RATE, bool(ok), [(u_fit.window[1], u_fit.rate)], params)


def check_thm4(b, seq_class: SeqClass, tol: float = 1e-12) -> TheoremReport:
    """``b_k <= tol`` for all k >= 1 when ``a`` is non-negative and log-convex."""
    v = np.asarray(as_seq(b))
    params = {"tol": tol, "n": v.size, "hypotheses_met": seq_class.log_convex}
    if not seq_class.log_convex:
        return TheoremReport(TheoremId.THM4_SIGNS, None, [], params)
    tail = v[1:]
    if tail.size == 0:
        return TheoremReport(TheoremId.THM4_SIGNS, True, [], params)
    bad = np.flatnonzero(tail > tol)
    params["max_b"] = float(tail.max())
    if bad.size:
        return TheoremReport(TheoremId.THM4_SIGNS, False, _worst(bad + 1, tail[bad], tail[bad]), params)
    i = int(np.argmax(tail))
    return TheoremReport(TheoremId.THM4_SIGNS, True, [(i + 1, tail[i])], params)


def check_thm_final(
    b,
    u,
    tol_identity: float = 1e-10,
    tail_bound: float = 0.01,
    seq_class: Optional[SeqClass] = None,
) -> TheoremReport:
    """``sum |b_k| = 2`` approached through the exact identity ``S_N = 2 - u_N``.

    (i) ``|S_N - (2 - u_N)| <= tol_identity`` (pure algebra once ``b_0 = 1`` and
    ``b_k <= 0``); (ii) ``2 - S_N <= tail_bound``. The tail part needs slow,
    monotone, log-convex ``a``; otherwise it is skipped and the report is
    not-applicable unless the identity itself failed.
    """
    bv = np.asarray(as_seq(b))
    uv = np.asarray(as_seq(u))
    N = bv.size - 1
    s_n = math.fsum(np.abs(bv))
    u_n = float(uv[N])
    gap = abs(s_n - (2.0 - u_n))
    identity_ok = gap <= tol_identity
    params = {
        "n": bv.size,
        "S_N": s_n,
        "u_N": u_n,
        "identity_gap": gap,
        "tol_identity": tol_identity,
        "tail_bound": tail_bound,
        "identity_ok": identity_ok,
    }
    tail_applicable = seq_class is None or (seq_class.slow_monotone and seq_class.log_convex)
    if not identity_ok:
        return TheoremReport(TheoremId.THM_FINAL_NORM_TWO, False, [(N, s_n)], params)
    if not tail_applicable:
        params["tail"] = "not-applicable"
        return TheoremReport(TheoremId.THM_FINAL_NORM_TWO, None, [], params)
    deficit = 2.0 - s_n
    params["deficit"] = deficit
    params["tail"] = deficit <= tail_bound
    if deficit > tail_bound:
        return TheoremReport(TheoremId.THM_FINAL_NORM_TWO, False, [(N, deficit)], params)
    return TheoremReport(TheoremId.THM_FINAL_NORM_TWO, True, [(N, s_n)], params)


def run_suite(
    alpha: float,
    n: int,
    method: str = "newton",
    theorems=None,
    tol: float = 1e-10,
    sign_tol: float = 1e-12,
    tail_bound: float = 0.01,
) -> list:
    """Generate ``a_k = (1+k)^-alpha``, invert it, and run the selected validators."""
    from tritop.inverse import fundamental, invert

    theorems = [TheoremId(t) for t in (theorems or list(TheoremId))]
    spec = GeneratorSpec.power_law(alpha, n)
    a = generate(spec)
    cls = classify(a, spec)
    res = invert(a, n, method=method)
    u = fundamental(a, res.b).u

    reports = []
    for tid in theorems:
        if tid is TheoremId.STMT2_BOUNDS:
            rep = check_stmt2(u, tol)
            if not cls.monotone_nonincreasing:
                rep = TheoremReport(tid, None, [], dict(rep.params, hypotheses_met=False))
        elif tid is TheoremId.THM1_FUNDAMENTAL_DECAY:
            rep = check_thm1(u, cls)
        elif tid is TheoremId.COR_INVERSE_DECAY:
            rep = check_cor_b_decay(res.b, cls)
        elif tid is TheoremId.THM_DECAY_RATE:
            if cls.decay is not Decay.SLOW:
                rep = TheoremReport(tid, None, [], {"alpha": alpha, "hypotheses_met": False})
            else:
                rep = check_thm_decay_rate(estimate_decay_rate(u), alpha)
        elif tid is TheoremId.THM4_SIGNS:
            rep = check_thm4(res.b, cls, sign_tol)
        else:
            rep = check_thm_final(res.b, u, tol, tail_bound, cls)
        rep.params.update(alpha=alpha, method=res.method.value, au_residual=res.au_residual)
        reports.append(rep)
    return reports
