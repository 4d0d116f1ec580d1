"""JSON and CSV serialisation of lemma reports with atomic file writes.

Floats are written with 17 significant digits so every value round-trips
exactly. The JSON key order is fixed:
``lemma_id, params, pass, fit, witnesses, constants, runtime_ms, timestamp``.
``timestamp`` and ``runtime_ms`` are the wall-clock fields; everything else
is a deterministic function of the run configuration.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .lab import BoundFit, LemmaReport, Witness

CSV_COLUMNS = ("sigma", "t", "value", "bound", "margin")
VOLATILE_FIELDS = ("timestamp", "runtime_ms")


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with 17-significant-digit floats and insertion-ordered keys."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def utc_timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%fZ")


def report_to_dict(report: LemmaReport, timestamp: str | None = None) -> dict:
    return {
        "lemma_id": report.lemma_id,
        "params": report.params,
        "pass": bool(report.passed),
        "fit": report.fit.to_dict() if report.fit is not None else None,
        "witnesses": [w.to_dict() for w in report.witnesses],
        "constants": report.constants,
        "runtime_ms": float(report.runtime_ms),
        "timestamp": timestamp if timestamp is not None else utc_timestamp(),
    }


def report_to_json(report: LemmaReport, timestamp: str | None = None) -> str:
    return dumps(report_to_dict(report, timestamp)) + "\n"


def report_from_json(text: str) -> LemmaReport:
    d = json.loads(text)
    fit = BoundFit.from_dict(d["fit"]) if d.get("fit") is not None else None
    witnesses = [Witness(w["label"], w["sigma"], w["t"], w["value"]) for w in d["witnesses"]]
    return LemmaReport(d["lemma_id"], d["params"], bool(d["pass"]), fit, witnesses, d.get("constants", {}),
                       runtime_ms=d.get("runtime_ms", 0.0))


def strip_volatile(text: str) -> str:
    """Report JSON with the wall-clock fields removed, for determinism comparisons."""
    lines = text.splitlines(keepends=True)
    return "".join(l for l in lines if not any(l.lstrip().startswith(f'"{k}"') for k in VOLATILE_FIELDS))


def samples_to_csv(samples) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in samples:
        writer.writerow(["nan" if v is None else format(float(v), ".17g") for v in row])
    return buf.getvalue()


def atomic_write(path: Path, text: str) -> Path:
    """Write via a temporary file in the same directory, then rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def emit_report(report: LemmaReport, out_dir, fmt: str = "json", timestamp: str | None = None) -> list[Path]:
    """Write ``<lemma_id>-<timestamp>.json`` and/or ``.csv`` into ``out_dir``; returns the paths."""
    if fmt not in ("json", "csv", "both"):
        raise ValueError(f"unknown format {fmt!r}")
    out_dir = Path(out_dir)
    if not out_dir.is_dir():
        raise FileNotFoundError(f"output directory {out_dir} does not exist")
    timestamp = timestamp or utc_timestamp()
    stem = f"{report.lemma_id}-{timestamp}"
    written = []
    if fmt in ("json", "both"):
        written.append(atomic_write(out_dir / f"{stem}.json", report_to_json(report, timestamp)))
    if fmt in ("csv", "both"):
        written.append(atomic_write(out_dir / f"{stem}.csv", samples_to_csv(report.samples)))
    return written
