"""Grid serialization round trips and JSON helpers."""

import io
import json

import numpy as np
import pytest

from gridvar import GridFunction, GridvarError
from gridvar.grid_io import (
    dump_json,
    grid_from_payload,
    grid_payload,
    json_safe,
    load_grid,
    save_grid,
)


def test_json_round_trip_d3(tmp_path):
    rng = np.random.default_rng(0)
    f = GridFunction(rng.uniform(-1, 1, size=(3, 3, 3)))
    path = tmp_path / "g.json"
    save_grid(f, path)
    g = load_grid(path)
    assert g.d == 3 and g.n == 3
    assert np.array_equal(g.values, f.values)


@pytest.mark.parametrize("shape", [(7,), (4, 4)])
def test_csv_round_trip_exact(tmp_path, shape):
    rng = np.random.default_rng(1)
    f = GridFunction(rng.uniform(-1, 1, size=shape))
    path = tmp_path / "g.csv"
    save_grid(f, path)
    g = load_grid(path)
    # repr() serialization keeps every bit
    assert np.array_equal(g.values, f.values)


def test_csv_single_row_and_column(tmp_path):
    row = tmp_path / "row.csv"
    row.write_text("0.0,1.5,2.0\n")
    f = load_grid(row)
    assert f.d == 1 and list(f.values) == [0.0, 1.5, 2.0]

    col = tmp_path / "col.csv"
    col.write_text("0.0\n1.5\n2.0\n")
    g = load_grid(col)
    assert g.d == 1 and np.array_equal(g.values, f.values)


def test_csv_rejects_ragged_and_empty(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,4,5\n")
    with pytest.raises(GridvarError):
        load_grid(bad)
    empty = tmp_path / "empty.csv"
    empty.write_text("\n")
    with pytest.raises(GridvarError):
        load_grid(empty)


def test_csv_rejects_d3(tmp_path):
    f = GridFunction(np.zeros((3, 3, 3)))
    with pytest.raises(GridvarError):
        save_grid(f, tmp_path / "g.csv")


def test_missing_file_and_bad_json(tmp_path):
    with pytest.raises(GridvarError):
        load_grid(tmp_path / "nope.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(GridvarError):
        load_grid(broken)


def test_payload_shape_and_extras():
    f = GridFunction(np.array([[0.0, 1.0], [2.0, 3.0]]))
    payload = grid_payload(f)
    assert payload == {"d": 2, "n": 2, "values": [0.0, 1.0, 2.0, 3.0]}
    # extra keys (e.g. provenance from `generate`) are tolerated
    payload["family"] = "uniform"
    payload["seed"] = 7
    g = grid_from_payload(payload)
    assert np.array_equal(g.values, f.values)

    with pytest.raises(GridvarError):
        grid_from_payload({"d": 1, "values": [0.0]})
    with pytest.raises(GridvarError):
        grid_from_payload({"d": 1, "n": 2, "values": "01"})


def test_stdin_dash(monkeypatch):
    f = GridFunction(np.array([0.0, 2.0, 1.0]))
    text = dump_json(grid_payload(f))
    monkeypatch.setattr("sys.stdin", io.StringIO(text))
    g = load_grid("-")
    assert np.array_equal(g.values, f.values)


def test_dump_json_stable_and_finite():
    assert dump_json({"b": 1, "a": 2}) == '{"a": 2, "b": 1}\n'
    pretty = dump_json({"a": [1]}, pretty=True)
    assert pretty.startswith('{\n  "a"')
    with pytest.raises(ValueError):
        dump_json({"x": float("nan")})


def test_json_safe_conversions():
    out = json_safe({
        "arr": np.arange(3, dtype=np.int64),
        "f": np.float64(0.5),
        "flag": np.bool_(True),
        "plain": (1, 2.5, False),
        "nested": {"k": np.float32(1.0)},
    })
    assert out == {
        "arr": [0, 1, 2],
        "f": 0.5,
        "flag": True,
        "plain": [1, 2.5, False],
        "nested": {"k": 1.0},
    }
    assert json.dumps(out)  # actually serializable
    assert isinstance(out["flag"], bool) and isinstance(out["plain"][2], bool)
    with pytest.raises(GridvarError):
        json_safe({"bad": np.float64("inf")})
