"""CSV / JSON emission of sweep results.

Floats are written with 17 significant digits in scientific notation so a
parsed CSV reproduces the in-memory values exactly. Missing measures are
empty fields; a contrast with both inputs zero is the literal ``no-signal``.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .measures import FLAT_COLUMNS, NO_SIGNAL
from .sweep import CONTRAST_MEASURES, SweepResult

NO_SIGNAL_TEXT = "no-signal"
CONTRAST_COLUMNS = tuple(f"contrast_{m}" for m in CONTRAST_MEASURES)


def columns(result: SweepResult) -> list:
    return [*result.axis_names, "branch", "delta_b", *FLAT_COLUMNS, *CONTRAST_COLUMNS]


def records(result: SweepResult) -> list:
    """One flat dict per row, identical key set for every row."""
    by_index = {c.index: c.contrasts for c in result.contrasts}
    out = []
    for row in result.rows:
        rec = dict(zip(result.axis_names, row.values))
        rec["branch"] = "+" if row.sign > 0 else "-"
        rec["delta_b"] = row.delta_b
        rec.update(row.report.to_flat())
        contrasts = by_index.get(row.index, {})
        for m, col in zip(CONTRAST_MEASURES, CONTRAST_COLUMNS):
            rec[col] = contrasts.get(m)
        out.append(rec)
    return out


def format_value(value) -> str:
    if value is None:
        return ""
    if value is NO_SIGNAL:
        return NO_SIGNAL_TEXT
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return repr(value)
        return f"{value:.16e}"
    return str(value)


def parse_value(text: str):
    if text == "":
        return None
    if text == NO_SIGNAL_TEXT:
        return NO_SIGNAL
    if text in ("true", "false"):
        return text == "true"
    if text in ("+", "-"):
        return text
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    cols = columns(result)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for rec in records(result):
        writer.writerow([format_value(rec[c]) for c in cols])
    return buf.getvalue()


def read_csv(path) -> list:
    with open(path, newline="") as fh:
        return [{k: parse_value(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def _json_value(value):
    if value is NO_SIGNAL:
        return NO_SIGNAL_TEXT
    return value


def to_json_obj(result: SweepResult, meta: bool = True) -> dict:
    metadata = dict(result.metadata)
    if not meta:
        metadata.pop("timestamp", None)
    contrasts = []
    for c in result.contrasts:
        rec = {"index": c.index, **dict(zip(result.axis_names, c.values))}
        rec.update({f"contrast_{m}": _json_value(v) for m, v in c.contrasts.items()})
        contrasts.append(rec)
    rows = [{k: _json_value(v) for k, v in rec.items()} for rec in records(result)]
    return {"metadata": metadata, "rows": rows, "contrasts": contrasts}


def to_json(result: SweepResult, meta: bool = True) -> str:
    return json.dumps(to_json_obj(result, meta), indent=1) + "\n"


def write_result(result: SweepResult, path, fmt: str = "csv", meta: bool = True) -> None:
    """Write ``result``; CSV metadata goes to a ``<path>.meta.json`` sidecar."""
    if fmt == "csv":
        text = to_csv(result)
    elif fmt == "json":
        text = to_json(result, meta)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", newline="") as fh:
        fh.write(text)
    if fmt == "csv" and meta:
        with open(f"{path}.meta.json", "w") as fh:
            json.dump(result.metadata, fh, indent=1)
            fh.write("\n")
