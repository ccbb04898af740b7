"""Command-line entry point: ``tritop {generate,invert,analyze,verify,reproduce-figure}``.

Exit codes: 0 success, 1 a theorem check failed, 2 validation, 3 singular
input, 4 convergence, 5 I/O. Errors are reported as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import enum
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np

from tritop import __version__
from tritop._backend import BACKEND
from tritop.errors import TritopError, ValidationError
from tritop.inverse import fundamental, invert, residual_ab, residual_au, verify_uu
from tritop.io import SeriesFile, log_sample_indices, parse_sample, read_series, write_csv, write_json, write_series
from tritop.norms import estimate_decay_rate
from tritop.reproduce import DEFAULT_FIGURE_N, reproduce_figure
from tritop.sequences import GeneratorSpec, Kind, classify, generate
from tritop.theorems import TheoremId, run_suite

EXHAUSTIVE_LIMIT = 2**14


class Command(str, enum.Enum):
    GENERATE = "generate"
    INVERT = "invert"
    ANALYZE = "analyze"
    VERIFY = "verify"
    REPRODUCE_FIGURE = "reproduce-figure"


@dataclass
class RunConfig:
    command: Command
    n: int = 1000
    alpha_list: list = field(default_factory=lambda: [0.5])
    kind: str = "power-law"
    c: float = 1.0
    method: str = "auto"
    sample: Optional[int] = None  # None = all rows, else log count
    output_path: Optional[str] = None
    format: str = "csv"
    theorems: list = field(default_factory=list)
    tol: Optional[float] = None
    exhaustive_residual: bool = False
    timestamp: bool = True
    with_u: bool = True
    input_path: Optional[str] = None
    column: str = "u"
    window: Optional[tuple] = None

    def __post_init__(self):
        self.command = Command(self.command)
        if self.command is not Command.ANALYZE or self.input_path is None:
            if isinstance(self.n, bool) or self.n < 1:
                raise ValidationError(f"--n must be a positive integer, got {self.n}")
        if self.kind == "power-law" and not self.alpha_list:
            raise ValidationError("--alpha is required for power-law commands")
        if self.method not in ("naive", "newton", "auto"):
            raise ValidationError(f"unknown method {self.method!r}")
        if self.format not in ("csv", "json", "raw"):
            raise ValidationError(f"unknown format {self.format!r}")
        if self.exhaustive_residual and self.n > EXHAUSTIVE_LIMIT:
            raise ValidationError(f"--exhaustive-residual is limited to n <= {EXHAUSTIVE_LIMIT}")


def _spec(cfg: RunConfig, alpha=None) -> GeneratorSpec:
    if cfg.kind == "power-law":
        return GeneratorSpec.power_law(cfg.alpha_list[0] if alpha is None else alpha, cfg.n)
    if cfg.kind == "constant":
        return GeneratorSpec.constant(cfg.c, cfg.n)
    if cfg.kind == "jaffard":
        return GeneratorSpec.jaffard(cfg.n)
    raise ValidationError(f"unknown generator kind {cfg.kind!r}")


def _metadata(cfg: RunConfig, **extra):
    meta = {"tool": "tritop", "version": __version__, "backend": BACKEND}
    if cfg.timestamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    meta.update(extra)
    return meta


def _rows(cfg, n):
    return None if cfg.sample is None else log_sample_indices(n, cfg.sample)


def _emit_series(cfg, series):
    if cfg.output_path:
        write_series(cfg.output_path, series, cfg.format)
        return
    if cfg.format == "raw":
        raise ValidationError("raw format needs --out")
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        p = Path(tmp) / "out"
        (write_csv if cfg.format == "csv" else write_json)(p, series)
        sys.stdout.write(p.read_text(encoding="utf-8"))


def _emit_json(cfg, doc, stdout_too=False):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if cfg.output_path:
        Path(cfg.output_path).write_text(text, encoding="utf-8", newline="\n")
    if stdout_too or not cfg.output_path:
        sys.stdout.write(text)


def _nan_to_none(x):
    return x if isinstance(x, float) and math.isfinite(x) else None


def cmd_generate(cfg):
    spec = _spec(cfg)
    a = np.asarray(generate(spec))
    meta = _metadata(cfg, generator=spec.to_dict(), n=cfg.n)
    _emit_series(cfg, SeriesFile.from_full({"a": a}, _rows(cfg, cfg.n), meta))
    return 0


def cmd_invert(cfg):
    spec = _spec(cfg)
    a = generate(spec)
    samples = cfg.n if cfg.exhaustive_residual else 64
    res = invert(a, cfg.n, method=cfg.method, tol=cfg.tol, samples=samples)
    fr = fundamental(a, res.b)
    report = {
        "n": cfg.n,
        "method": res.method.value,
        "normalized": res.normalized,
        "au_residual": res.au_residual,
        "ab_residual": residual_ab(a, res.b, samples),
        "uu_residual": verify_uu(fr.u, fr.d, samples),
        "residual_samples": "all" if samples >= cfg.n else samples,
    }
    meta = _metadata(cfg, generator=spec.to_dict(), **report)
    cols = {"a": np.asarray(a), "b": np.asarray(res.b)}
    if cfg.with_u:
        cols["u"] = np.asarray(fr.u)
    if cfg.output_path:
        write_series(cfg.output_path, SeriesFile.from_full(cols, _rows(cfg, cfg.n), meta), cfg.format)
        sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    else:
        _emit_series(cfg, SeriesFile.from_full(cols, _rows(cfg, cfg.n), meta))
    return 0


def _window(cfg):
    return tuple(cfg.window) if cfg.window else None


def cmd_analyze(cfg):
    if cfg.input_path:
        series = read_series(cfg.input_path)
        if cfg.column not in series.columns:
            raise ValidationError(f"column {cfg.column!r} not in {cfg.input_path}")
        if series.k.size != series.k[-1] + 1:
            raise ValidationError("analyze needs an unsampled series (every k present)")
        fit = estimate_decay_rate(np.abs(series.columns[cfg.column]), _window(cfg))
        doc = {"input": str(cfg.input_path), "column": cfg.column, "fit": fit.to_dict()}
        _emit_json(cfg, doc)
        return 0
    spec = _spec(cfg)
    a = generate(spec)
    res = invert(a, cfg.n, method=cfg.method, tol=cfg.tol)
    u = fundamental(a, res.b).u
    cls = classify(a, spec)
    doc = {
        "generator": spec.to_dict(),
        "class": cls.to_dict(),
        "method": res.method.value,
        "au_residual": res.au_residual,
        "fits": {
            "a": estimate_decay_rate(np.abs(np.asarray(a)), _window(cfg)).to_dict(),
            "u": estimate_decay_rate(u, _window(cfg)).to_dict(),
            "abs_b": estimate_decay_rate(np.abs(np.asarray(res.b)), _window(cfg)).to_dict(),
        },
    }
    if spec.kind is Kind.POWER_LAW:
        doc["predicted"] = {"a": spec.alpha, "u": 1.0 - spec.alpha, "abs_b": 2.0 - spec.alpha}
    _emit_json(cfg, doc)
    return 0


def cmd_verify(cfg):
    theorems = cfg.theorems or list(TheoremId)
    reports = []
    for alpha in cfg.alpha_list:
        kwargs = {} if cfg.tol is None else {"tol": cfg.tol}
        reports.extend(run_suite(alpha, cfg.n, method=cfg.method, theorems=theorems, **kwargs))
    doc = {"metadata": _metadata(cfg, n=cfg.n), "reports": [r.to_dict() for r in reports]}
    _emit_json(cfg, doc)
    return 1 if any(r.passed is False for r in reports) else 0


def cmd_reproduce(cfg):
    out = cfg.output_path or "figure-data"
    method = "newton" if cfg.method == "auto" else cfg.method
    summary = reproduce_figure(
        cfg.alpha_list,
        cfg.n,
        out,
        cfg.format,
        rows=cfg.sample or 512,
        method=method,
        metadata=_metadata(cfg, n_choice="default 10^6 unless --n given"),
    )
    brief = [{k: e[k] for k in ("alpha", "upsilon", "upsilon_predicted", "beta", "beta_predicted", "low_confidence")}
             for e in summary["alphas"]]
    sys.stdout.write(json.dumps(brief, sort_keys=True) + "\n")
    return 0


COMMANDS = {
    Command.GENERATE: cmd_generate,
    Command.INVERT: cmd_invert,
    Command.ANALYZE: cmd_analyze,
    Command.VERIFY: cmd_verify,
    Command.REPRODUCE_FIGURE: cmd_reproduce,
}


def run(cfg: RunConfig) -> int:
    return COMMANDS[cfg.command](cfg)


def _alpha_list(values):
    out = []
    for v in values or []:
        for part in str(v).split(","):
            if part.strip():
                out.append(float(part))
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser():
    p = _Parser(prog="tritop", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"tritop {__version__} ({BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, default_n=1000, gen=True):
        sp.add_argument("--n", type=int, default=default_n)
        sp.add_argument("--alpha", action="append", help="exponent(s); repeat or comma-separate")
        if gen:
            sp.add_argument("--kind", choices=["power-law", "constant", "jaffard"], default="power-law")
            sp.add_argument("--c", type=float, default=1.0, help="value for --kind constant")
        sp.add_argument("--out")
        sp.add_argument("--format", choices=["csv", "json", "raw"], default="csv")
        sp.add_argument("--no-timestamp", action="store_true")

    g = sub.add_parser("generate", help="write a generated sequence")
    common(g)
    g.add_argument("--sample", default="all")

    inv = sub.add_parser("invert", help="invert and write k, a, b, u")
    common(inv)
    inv.add_argument("--method", choices=["naive", "newton", "auto"], default="auto")
    inv.add_argument("--sample", default="all")
    inv.add_argument("--tol", type=float)
    inv.add_argument("--exhaustive-residual", action="store_true")
    inv.add_argument("--no-u", action="store_true")

    an = sub.add_parser("analyze", help="fit decay rates")
    common(an)
    an.add_argument("--method", choices=["naive", "newton", "auto"], default="newton")
    an.add_argument("--tol", type=float)
    an.add_argument("--input", help="series file to analyze instead of a generator")
    an.add_argument("--column", default="u")
    an.add_argument("--window", type=int, nargs=2, metavar=("K_LO", "K_HI"))

    ver = sub.add_parser("verify", help="run theorem validators on power laws")
    common(ver, gen=False)
    ver.add_argument("--method", choices=["naive", "newton", "auto"], default="newton")
    ver.add_argument("--theorem", action="append", choices=[t.value for t in TheoremId] + ["all"])
    ver.add_argument("--tol", type=float)

    rf = sub.add_parser("reproduce-figure", help="decay data for several alpha < 1")
    common(rf, default_n=DEFAULT_FIGURE_N, gen=False)
    rf.add_argument("--method", choices=["naive", "newton", "auto"], default="newton")
    rf.add_argument("--sample", default="log:512")
    return p


def config_from_args(ns) -> RunConfig:
    command = Command(ns.command)
    alphas = _alpha_list(ns.alpha)
    if not alphas:
        alphas = [0.25, 0.5, 0.75] if command is Command.REPRODUCE_FIGURE else [0.5]
    elif command in (Command.GENERATE, Command.INVERT, Command.ANALYZE) and len(alphas) > 1:
        raise ValidationError(f"{command.value} takes a single --alpha")
    theorems = [t for t in (getattr(ns, "theorem", None) or []) if t != "all"]
    return RunConfig(
        command=command,
        n=ns.n,
        alpha_list=alphas,
        kind=getattr(ns, "kind", "power-law"),
        c=getattr(ns, "c", 1.0),
        method=getattr(ns, "method", "auto"),
        sample=parse_sample(getattr(ns, "sample", "all")),
        output_path=ns.out,
        format=ns.format,
        theorems=theorems,
        tol=getattr(ns, "tol", None),
        exhaustive_residual=getattr(ns, "exhaustive_residual", False),
        timestamp=not ns.no_timestamp,
        with_u=not getattr(ns, "no_u", False),
        input_path=getattr(ns, "input", None),
        column=getattr(ns, "column", "u"),
        window=getattr(ns, "window", None),
    )


def _fail(exc, code):
    doc = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if hasattr(exc, "residual"):
        doc["residual"] = exc.residual
    sys.stderr.write(json.dumps(doc) + "\n")
    return code


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        return run(config_from_args(ns))
    except TritopError as exc:
        return _fail(exc, exc.exit_code)
    except OSError as exc:
        return _fail(exc, 5)


if __name__ == "__main__":
    sys.exit(main())
