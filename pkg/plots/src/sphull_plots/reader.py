"""Input parsing for the plotting scripts.

Accepts the ``sphull`` CLI's CSV files (validated against the exact column
schema of the producing command) or its JSON files (validated via the
embedded ``schema_version`` and ``command`` fields).  No statistics are
recomputed here: the CSV is the single source of numerical truth.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

SCHEMA_VERSION = 1

# Exact header of each producing command; a mismatch means the file was not
# written by that command (or by a different schema version).
EXPECTED_COLUMNS = {
    "hist": ["statistic", "bin_left", "bin_right", "count", "mean"],
    "curve": ["kind", "t", "trial", "width", "area", "volume"],
    "deficiency": ["n", "width_random", "width_model", "width_ratio",
                   "area_random", "area_model", "area_ratio",
                   "volume_random", "volume_model", "volume_ratio",
                   "length_random_per_sqrt_n", "length_model_per_sqrt_n"],
}


class SchemaError(ValueError):
    """The input file does not match the expected producing command."""


def _coerce(value: str):
    if value == "":
        return None
    if value in ("true", "false"):
        return value == "true"
    try:
        return float(value)
    except ValueError:
        return value


def read_rows(path: str | Path, kind: str) -> list[dict]:
    """Rows of a CLI output file, checked against the schema for `kind`."""
    if kind not in EXPECTED_COLUMNS:
        raise SchemaError(f"unknown input kind: {kind}")
    path = Path(path)
    if path.suffix == ".json":
        return _read_json(path, kind)
    return _read_csv(path, kind)


def _read_csv(path: Path, kind: str) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if header != EXPECTED_COLUMNS[kind]:
            raise SchemaError(
                f"{path}: columns {header} do not match the '{kind}' "
                f"schema {EXPECTED_COLUMNS[kind]}")
        rows = [{c: _coerce(v) for c, v in zip(header, line)}
                for line in reader if line]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def _read_json(path: Path, kind: str) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"{path}: schema_version "
                          f"{payload.get('schema_version')!r}, expected "
                          f"{SCHEMA_VERSION}")
    if payload.get("command") != kind:
        raise SchemaError(f"{path}: produced by {payload.get('command')!r}, "
                          f"expected {kind!r}")
    if payload.get("columns") != EXPECTED_COLUMNS[kind]:
        raise SchemaError(f"{path}: columns do not match the '{kind}' schema")
    rows = payload.get("rows", [])
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return [{c: (None if v == "" else v) for c, v in row.items()}
            for row in rows]
