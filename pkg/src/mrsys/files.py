"""JSON system files.

Layout::

    {
      "m": 2, "n": 4,
      "dims": {"state": 2, "input": 1, "output": 1},
      "A": [ <matrix per central time t = 0..lcm(m,n)-1> ],
      "B": [...], "C": [...], "D": [...]
    }

A matrix is a list of rows, a row is a list of cells, and every cell
is a two-element ``[re, im]`` pair, so complex data survives a round
trip bit for bit. Non-finite numbers are rejected on read.
"""

import json
from math import lcm
from pathlib import Path

import numpy as np

from .exceptions import SystemFileError
from .system import MultirateSystem


def _encode_matrix(mat: np.ndarray) -> list:
    return [
        [[float(cell.real), float(cell.imag)] for cell in row] for row in mat
    ]


def system_to_json_dict(sys: MultirateSystem) -> dict:
    return {
        "m": sys.m,
        "n": sys.n,
        "dims": {
            "state": sys.state_dim,
            "input": sys.input_dim,
            "output": sys.output_dim,
        },
        "A": [_encode_matrix(mat) for mat in sys.A],
        "B": [_encode_matrix(mat) for mat in sys.B],
        "C": [_encode_matrix(mat) for mat in sys.C],
        "D": [_encode_matrix(mat) for mat in sys.D],
    }


def _require_int(data, key, minimum, where):
    value = data.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise SystemFileError(
            f"{where}: {key!r} must be an integer >= {minimum}, got {value!r}"
        )
    return value


def _decode_cell(cell, where) -> complex:
    if (
        not isinstance(cell, list)
        or len(cell) != 2
        or not all(isinstance(part, (int, float)) for part in cell)
        or any(isinstance(part, bool) for part in cell)
    ):
        raise SystemFileError(f"{where}: cell must be a [re, im] number pair, got {cell!r}")
    value = complex(float(cell[0]), float(cell[1]))
    if not (np.isfinite(value.real) and np.isfinite(value.imag)):
        raise SystemFileError(f"{where}: non-finite entry {cell!r}")
    return value


def _decode_matrix(obj, rows, cols, where) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != rows:
        raise SystemFileError(f"{where}: expected {rows} rows")
    out = np.zeros((rows, cols), dtype=complex)
    for r, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != cols:
            raise SystemFileError(f"{where} row {r}: expected {cols} cells")
        for c, cell in enumerate(row):
            out[r, c] = _decode_cell(cell, f"{where}[{r}][{c}]")
    return out


def system_from_json_dict(data) -> MultirateSystem:
    """Build a system from parsed JSON, checking the schema strictly."""
    if not isinstance(data, dict):
        raise SystemFileError("top level must be a JSON object")
    m = _require_int(data, "m", 1, "top level")
    n = _require_int(data, "n", 1, "top level")
    dims = data.get("dims")
    if not isinstance(dims, dict):
        raise SystemFileError("top level: missing 'dims' object")
    dx = _require_int(dims, "state", 0, "dims")
    du = _require_int(dims, "input", 0, "dims")
    dy = _require_int(dims, "output", 0, "dims")
    T = lcm(m, n)
    shapes = {"A": (dx, dx), "B": (dx, du), "C": (dy, dx), "D": (dy, du)}
    lists = {}
    for name, (rows, cols) in shapes.items():
        seq = data.get(name)
        if not isinstance(seq, list) or len(seq) != T:
            raise SystemFileError(
                f"{name!r} must be a list of {T} matrices (lcm of m and n)"
            )
        lists[name] = tuple(
            _decode_matrix(mat, rows, cols, f"{name}[{t}]")
            for t, mat in enumerate(seq)
        )
    return MultirateSystem(
        m, n, dx, du, dy, lists["A"], lists["B"], lists["C"], lists["D"]
    )


def _reject_constant(token: str):
    raise ValueError(f"non-finite JSON constant {token!r}")


def load_system(path) -> MultirateSystem:
    """Read and strictly validate a system file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SystemFileError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except (json.JSONDecodeError, ValueError) as exc:
        raise SystemFileError(f"{path}: invalid JSON: {exc}") from exc
    return system_from_json_dict(data)


def save_system(sys: MultirateSystem, path) -> None:
    Path(path).write_text(
        json.dumps(system_to_json_dict(sys), indent=2) + "\n"
    )
