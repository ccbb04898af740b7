"""Series files: CSV, JSON and raw little-endian doubles with a JSON sidecar.

CSV layout: one comment line ``# {metadata json}``, the header ``k,a,b,u``
(only the columns present), then rows with 17 significant digits. Raw files
start with a 16-byte header: magic ``TTOP``, u32 format version, u64 length.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from tritop.errors import ValidationError

__all__ = [
    "SeriesFile",
    "COLUMN_ORDER",
    "log_sample_indices",
    "parse_sample",
    "write_csv",
    "read_csv",
    "write_json",
    "read_json",
    "write_raw",
    "read_raw",
    "write_series",
    "read_series",
]

COLUMN_ORDER = ("k", "a", "b", "u")
RAW_MAGIC = b"TTOP"
RAW_VERSION = 1
_RAW_HEADER = struct.Struct("<4sIQ")


@dataclass
class SeriesFile:
    k: np.ndarray
    columns: dict
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.k = np.asarray(self.k, dtype=np.int64)
        if self.k.size == 0 or self.k[0] != 0 or np.any(np.diff(self.k) <= 0):
            raise ValidationError("k must start at 0 and be strictly increasing")
        for name, col in list(self.columns.items()):
            col = np.asarray(col, dtype=np.float64)
            if col.shape != self.k.shape:
                raise ValidationError(f"column {name!r} has {col.size} rows, expected {self.k.size}")
            self.columns[name] = col

    @property
    def names(self):
        known = [c for c in COLUMN_ORDER[1:] if c in self.columns]
        return known + sorted(c for c in self.columns if c not in COLUMN_ORDER)

    @classmethod
    def from_full(cls, columns: dict, indices=None, metadata=None):
        """Build from full-length arrays, keeping only ``indices`` rows."""
        n = len(next(iter(columns.values())))
        idx = np.arange(n) if indices is None else np.asarray(indices, dtype=np.int64)
        return cls(idx, {name: np.asarray(v)[idx] for name, v in columns.items()}, dict(metadata or {}))


def log_sample_indices(n: int, count: int) -> np.ndarray:
    """Exactly ``min(count, n)`` distinct, roughly log-spaced indices including 0 and n-1."""
    if count < 2:
        raise ValidationError("sample count must be >= 2")
    if n <= count:
        return np.arange(n, dtype=np.int64)

    def build(m):
        g = np.round(np.geomspace(1, n - 1, m)).astype(np.int64)
        return np.unique(np.concatenate(([0], g, [n - 1])))

    lo, hi = count - 1, 4 * count + n
    while lo < hi:
        mid = (lo + hi) // 2
        if build(mid).size < count:
            lo = mid + 1
        else:
            hi = mid
    idx = build(lo)
    # rounding makes the unique count non-monotone in m; repair the size
    while idx.size < count:
        gap = int(np.argmax(np.diff(idx)))
        idx = np.insert(idx, gap + 1, (idx[gap] + idx[gap + 1]) // 2)
    if idx.size > count:
        # drop interior points nearest the top end
        idx = np.concatenate((idx[: count - 1], [n - 1]))
    return idx


def parse_sample(text: str):
    """``"all"`` -> None, ``"log:<count>"`` -> count (>= 16)."""
    if text == "all":
        return None
    if text.startswith("log:"):
        try:
            count = int(text[4:])
        except ValueError:
            raise ValidationError(f"bad sample spec {text!r}") from None
        if count < 16:
            raise ValidationError("log sample count must be >= 16")
        return count
    raise ValidationError(f"sample spec must be 'all' or 'log:<count>', got {text!r}")


def _fmt(x):
    return format(float(x), ".17g")


def write_csv(path, series: SeriesFile):
    names = series.names
    lines = ["# " + json.dumps(series.metadata, sort_keys=True), ",".join(["k", *names])]
    cols = [series.columns[c] for c in names]
    for i, k in enumerate(series.k.tolist()):
        lines.append(",".join([str(k), *(_fmt(c[i]) for c in cols)]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_csv(path) -> SeriesFile:
    text = Path(path).read_text(encoding="utf-8").splitlines()
    metadata = {}
    if text and text[0].startswith("#"):
        metadata = json.loads(text[0][1:].strip() or "{}")
        text = text[1:]
    header = text[0].split(",")
    if header[0] != "k":
        raise ValidationError(f"{path}: first column must be k")
    rows = [line.split(",") for line in text[1:] if line]
    k = np.array([int(r[0]) for r in rows], dtype=np.int64)
    cols = {name: np.array([float(r[i + 1]) for r in rows]) for i, name in enumerate(header[1:])}
    return SeriesFile(k, cols, metadata)


def write_json(path, series: SeriesFile):
    doc = {
        "metadata": series.metadata,
        "columns": {"k": series.k.tolist(), **{c: series.columns[c].tolist() for c in series.names}},
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True) + "\n", encoding="utf-8", newline="\n")


def read_json(path) -> SeriesFile:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    cols = dict(doc["columns"])
    k = cols.pop("k")
    return SeriesFile(np.asarray(k), {c: np.asarray(v, dtype=np.float64) for c, v in cols.items()}, doc.get("metadata", {}))


def _sidecar(path):
    return Path(str(path) + ".json")


def write_raw(path, values, metadata=None):
    """Write one sequence as raw doubles plus ``<path>.json`` metadata."""
    v = np.ascontiguousarray(values, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(_RAW_HEADER.pack(RAW_MAGIC, RAW_VERSION, v.size))
        fh.write(v.tobytes())
    _sidecar(path).write_text(json.dumps(metadata or {}, sort_keys=True) + "\n", encoding="utf-8", newline="\n")


def read_raw(path):
    """Return ``(values, metadata)``; metadata is ``{}`` when the sidecar is missing."""
    with open(path, "rb") as fh:
        head = fh.read(_RAW_HEADER.size)
        if len(head) != _RAW_HEADER.size:
            raise ValidationError(f"{path}: truncated raw header")
        magic, version, length = _RAW_HEADER.unpack(head)
        if magic != RAW_MAGIC:
            raise ValidationError(f"{path}: bad magic {magic!r}")
        if version != RAW_VERSION:
            raise ValidationError(f"{path}: unsupported raw format version {version}")
        data = fh.read()
    if len(data) != 8 * length:
        raise ValidationError(f"{path}: expected {length} doubles, found {len(data) / 8:g}")
    values = np.frombuffer(data, dtype="<f8").astype(np.float64)
    side = _sidecar(path)
    metadata = json.loads(side.read_text(encoding="utf-8")) if side.exists() else {}
    return values, metadata


def _raw_column_path(path, name):
    p = Path(path)
    return p.with_name(f"{p.stem}.{name}{p.suffix or '.raw'}")


def write_series(path, series: SeriesFile, fmt: str):
    if fmt == "csv":
        write_csv(path, series)
    elif fmt == "json":
        write_json(path, series)
    elif fmt == "raw":
        # one raw file per column next to a manifest at ``path``
        files = {}
        for name in ["k", *series.names]:
            col = series.k if name == "k" else series.columns[name]
            cpath = _raw_column_path(path, name)
            write_raw(cpath, col, {"column": name})
            files[name] = cpath.name
        doc = {"format": "raw", "metadata": series.metadata, "files": files}
        Path(path).write_text(json.dumps(doc, sort_keys=True) + "\n", encoding="utf-8", newline="\n")
    else:
        raise ValidationError(f"unknown format {fmt!r}")


def read_series(path, fmt: str | None = None) -> SeriesFile:
    path = Path(path)
    if fmt is None:
        fmt = {".csv": "csv", ".json": "json", ".raw": "raw"}.get(path.suffix, "csv")
    if fmt == "csv":
        return read_csv(path)
    if fmt == "raw":
        doc = json.loads(path.read_text(encoding="utf-8"))
        cols = {name: read_raw(path.with_name(fname))[0] for name, fname in doc["files"].items()}
        k = cols.pop("k").astype(np.int64)
        return SeriesFile(k, cols, doc.get("metadata", {}))
    return read_json(path)
