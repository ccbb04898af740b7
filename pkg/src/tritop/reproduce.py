"""Data behind the decay plots for ``a_k = (1+k)^-alpha``: per-alpha series files plus fitted rates."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from tritop.errors import ValidationError
from tritop.inverse import fundamental, invert
from tritop.io import SeriesFile, log_sample_indices, write_series
from tritop.norms import estimate_decay_rate
from tritop.sequences import GeneratorSpec, generate

__all__ = ["reproduce_figure", "figure_alpha", "DEFAULT_FIGURE_N", "U_RATE_TOL", "B_RATE_TOL", "MIN_DECADES"]

DEFAULT_FIGURE_N = 10**6
U_RATE_TOL = 0.05
B_RATE_TOL = 0.1
MIN_DECADES = 2.5  # fits over shorter windows are flagged low-confidence


def _workers(count):
    env = os.environ.get("TRITOP_THREADS")
    if env:
        try:
            return max(1, min(count, int(env)))
        except ValueError:
            pass
    return max(1, min(count, os.cpu_count() or 1))


def figure_alpha(alpha: float, n: int, method: str = "newton"):
    """Invert one power law and fit the decay of ``u`` and ``|b_k|`` (k >= 1)."""
    a = generate(GeneratorSpec.power_law(alpha, n))
    res = invert(a, n, method=method)
    u = np.asarray(fundamental(a, res.b).u)
    b = np.asarray(res.b)
    absb = np.abs(b)
    u_fit = estimate_decay_rate(u)
    b_fit = estimate_decay_rate(absb)
    summary = {
        "alpha": alpha,
        "n": n,
        "method": res.method.value,
        "au_residual": res.au_residual,
        "upsilon": u_fit.rate,
        "upsilon_predicted": 1.0 - alpha,
        "upsilon_ok": abs(u_fit.rate - (1.0 - alpha)) <= U_RATE_TOL,
        "beta": b_fit.rate,
        "beta_predicted": 2.0 - alpha,
        "beta_ok": abs(b_fit.rate - (2.0 - alpha)) <= B_RATE_TOL,
        "u_fit": u_fit.to_dict(),
        "b_fit": b_fit.to_dict(),
        "low_confidence": u_fit.decades < MIN_DECADES,
    }
    return np.asarray(a), absb, u, summary


def _alpha_tag(alpha):
    return format(alpha, "g").replace(".", "p")


def reproduce_figure(alphas, n: int = DEFAULT_FIGURE_N, out_dir=".", fmt: str = "csv", rows: int = 512,
                     method: str = "newton", metadata=None):
    """Write one log-sampled series per alpha (columns ``k, a, b=|b_k|, u``) and ``summary.json``.

    Returns the summary dict.
    """
    alphas = [float(x) for x in alphas]
    if not alphas:
        raise ValidationError("need at least one alpha")
    for x in alphas:
        if not 0 < x < 1:
            raise ValidationError(f"alpha={x} is outside the slow-decay range (0, 1)")
    if n < 10**4:
        raise ValidationError(f"n must be >= 10^4 for figure reproduction, got {n}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    idx = log_sample_indices(n, rows)

    def one(alpha):
        return figure_alpha(alpha, n, method)

    with ThreadPoolExecutor(max_workers=_workers(len(alphas))) as pool:
        results = list(pool.map(one, alphas))

    base_meta = dict(metadata or {})
    entries = []
    ext = {"csv": "csv", "json": "json", "raw": "raw"}[fmt]
    for alpha, (a, absb, u, summ) in zip(alphas, results):
        name = f"decay_alpha{_alpha_tag(alpha)}.{ext}"
        meta = dict(base_meta, generator=GeneratorSpec.power_law(alpha, n).to_dict(), n=n,
                    method=summ["method"], au_residual=summ["au_residual"], b_column="abs(b_k)")
        write_series(out / name, SeriesFile.from_full({"a": a, "b": absb, "u": u}, idx, meta), fmt)
        entries.append(dict(summ, file=name))
    summary = {"n": n, "rows": int(idx.size), "metadata": base_meta, "alphas": entries}
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n",
                                      encoding="utf-8", newline="\n")
    return summary
