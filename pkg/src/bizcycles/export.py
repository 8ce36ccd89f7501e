"""CSV/JSON/gnuplot writers with stable number formatting.

Floats are written with ``repr``, the shortest decimal string that round-trips
to the same double, so identical inputs always give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def json_text(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, allow_nan=False) + "\n"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


def columns_csv_text(header, *columns) -> str:
    return csv_text(header, zip(*columns))


def dat_text(comment: str, *columns) -> str:
    """Whitespace-separated columns with a ``#`` header line, as gnuplot reads them."""
    lines = [f"# {comment}"]
    lines += [" ".join(fmt(v) for v in row) for row in zip(*columns)]
    return "\n".join(lines) + "\n"


def series_csv_text(series) -> str:
    return columns_csv_text(("time", "value"), series.times, series.values)


def write_outputs(outdir, files: dict) -> list[Path]:
    """Write ``{filename: text}`` under ``outdir``; returns the written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in files.items():
        path = outdir / name
        path.write_text(text, encoding="utf-8", newline="")
        written.append(path)
    return written
