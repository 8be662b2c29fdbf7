"""Reading and writing grid functions.

JSON carries {"d": int, "n": int, "values": [...]} with values flattened in
row-major order. CSV holds a 1-d function as one column (or one row) and a
2-d function as an n x n matrix; higher dimensions are JSON-only.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import IO

import numpy as np

from .errors import GridvarError
from .grid import GridFunction, make_grid_function


def grid_payload(f: GridFunction) -> dict:
    """JSON-ready dict for a grid function (row-major value list)."""
    return {"d": f.d, "n": f.n, "values": [float(v) for v in f.values.ravel()]}


def grid_from_payload(obj: dict) -> GridFunction:
    if not isinstance(obj, dict) or not {"d", "n", "values"} <= set(obj):
        raise GridvarError('grid JSON must be an object with keys "d", "n", "values"')
    d, n = int(obj["d"]), int(obj["n"])
    values = obj["values"]
    if not isinstance(values, list):
        raise GridvarError('grid JSON "values" must be a list of reals')
    return make_grid_function([float(v) for v in values], d=d, n=n)


def _load_csv(handle: IO[str]) -> GridFunction:
    rows = [
        [float(cell) for cell in row if cell.strip() != ""]
        for row in csv.reader(handle)
        if any(cell.strip() != "" for cell in row)
    ]
    if not rows:
        raise GridvarError("CSV grid is empty")
    if len(rows) == 1:  # single row: a 1-d function
        return make_grid_function(rows[0])
    if all(len(r) == 1 for r in rows):  # single column: a 1-d function
        return make_grid_function([r[0] for r in rows])
    if any(len(r) != len(rows) for r in rows):
        raise GridvarError(
            f"CSV grid must be square for d=2, got {len(rows)} rows of lengths "
            f"{sorted({len(r) for r in rows})}"
        )
    return make_grid_function(rows)


def load_grid(path: str | Path) -> GridFunction:
    """Load a grid function from a .json or .csv file ("-" reads JSON from stdin)."""
    if str(path) == "-":
        import sys

        return grid_from_payload(json.load(sys.stdin))
    path = Path(path)
    if not path.exists():
        raise GridvarError(f"no such grid file: {path}")
    if path.suffix.lower() == ".csv":
        with path.open(newline="") as handle:
            return _load_csv(handle)
    with path.open() as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise GridvarError(f"{path} is not valid JSON: {exc}") from exc
    return grid_from_payload(obj)


def save_grid(f: GridFunction, path: str | Path) -> None:
    """Write a grid function to .json (any d) or .csv (d <= 2)."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        if f.d > 2:
            raise GridvarError(f"CSV supports d <= 2, got d={f.d}")
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle)
            if f.d == 1:
                writer.writerows([[repr(float(v))] for v in f.values])
            else:
                writer.writerows([[repr(float(v)) for v in row] for row in f.values])
        return
    path.write_text(dump_json(grid_payload(f)))


def dump_json(obj, pretty: bool = False) -> str:
    """Canonical JSON serialization: sorted keys, finite floats only."""
    text = json.dumps(obj, sort_keys=True, indent=2 if pretty else None,
                      allow_nan=False)
    return text + "\n"


def json_safe(value):
    """Recursively convert numpy scalars/arrays and tuples for JSON dumping."""
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if isinstance(value, np.ndarray):
        return [json_safe(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        if not math.isfinite(v):
            raise GridvarError(f"cannot serialize non-finite value {v}")
        return v
    if isinstance(value, (np.integer, int)):
        return int(value)
    return value
