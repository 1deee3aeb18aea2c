"""Report serialization: deterministic JSON validated against a versioned
schema, CSV tables, and a sidecar file for wall-clock metadata."""
from __future__ import annotations

import csv
import datetime as _dt
import json
import math
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

REPORT_SCHEMA_ID = "lindscat.report/v1"
SCHEMA_FILE = "report.schema.json"


def plain(v):
    """Convert numpy scalars and arrays, tuples and complex numbers to JSON
    types.  Non-finite floats become the strings "inf", "-inf" and "nan"."""
    if isinstance(v, dict):
        return {str(k): plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return plain(v.tolist())
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else repr(f)
    if isinstance(v, (complex, np.complexfloating)):
        return [plain(v.real), plain(v.imag)]
    return v


@lru_cache(maxsize=1)
def report_schema() -> dict:
    text = resources.files("lindscat").joinpath("schema", SCHEMA_FILE).read_text(encoding="utf-8")
    return json.loads(text)


def validate_report(report: dict) -> None:
    jsonschema.validate(report, report_schema())


def dumps_report(report: dict) -> str:
    validate_report(report)
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, float)):
        return "%.12e" % v
    return str(v)


def write_table(path: Path, table: dict) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(table["columns"])
        for row in table["rows"]:
            w.writerow([_cell(v) for v in row])


def write_outputs(report: dict, out_dir, fmt: str = "json", runtime: float | None = None,
                  stem: str = "report") -> list[Path]:
    """Write ``<stem>.json`` and the ``<stem>.meta.json`` sidecar; with
    ``json+csv`` also one CSV per table present in the report."""
    if fmt not in ("json", "json+csv"):
        raise ValueError(f"unknown format {fmt!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    main = out / f"{stem}.json"
    main.write_text(dumps_report(report), encoding="utf-8")
    written.append(main)
    meta = {"created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "runtime_seconds": runtime, "schema": REPORT_SCHEMA_ID}
    side = out / f"{stem}.meta.json"
    side.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    written.append(side)
    if fmt == "json+csv":
        for key in ("timeseries", "sweep"):
            if key in report:
                path = out / f"{stem}.{key}.csv"
                write_table(path, report[key])
                written.append(path)
    return written
