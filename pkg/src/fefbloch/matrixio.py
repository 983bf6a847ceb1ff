"""JSON matrix files.

Schema (``format`` 1)::

    {"format": 1, "dim": d, "matrix": [[[re, im], ...], ...]}

``matrix`` is d^2 rows of d^2 ``[re, im]`` pairs, row-major. Floats are
written with ``repr`` precision, so a write/read cycle is bit-exact.
"""

import json

import numpy as np

from .errors import ShapeError, FEFError

FORMAT_VERSION = 1


class MatrixFileError(FEFError, ValueError):
    code = "E_PARSE"


def matrix_to_json(M, dim=None):
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    dim = dim if dim is not None else int(round(np.sqrt(n)))
    rows = [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return {"format": FORMAT_VERSION, "dim": dim, "matrix": rows}


def matrix_from_json(obj):
    """Decode a format-1 object; returns ``(dim, matrix)``."""
    if not isinstance(obj, dict):
        raise MatrixFileError("top level must be a JSON object")
    if obj.get("format") != FORMAT_VERSION:
        raise MatrixFileError(f"field 'format': expected {FORMAT_VERSION}, got {obj.get('format')!r}")
    try:
        dim = int(obj["dim"])
        rows = obj["matrix"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFileError(f"missing or malformed field: {exc}") from exc
    n = dim * dim
    if not isinstance(rows, list) or len(rows) != n:
        raise ShapeError(f"field 'matrix': expected {n} rows for dim={dim}")
    M = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ShapeError(f"field 'matrix' row {i}: expected {n} entries")
        for j, entry in enumerate(row):
            if not isinstance(entry, list) or len(entry) != 2:
                raise MatrixFileError(f"field 'matrix' row {i} col {j}: expected [re, im]")
            M[i, j] = complex(float(entry[0]), float(entry[1]))
    return dim, M


def write_matrix(path, M, dim=None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(M, dim), fh)
        fh.write("\n")


def read_matrix(path):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise MatrixFileError(f"{path}: {exc.strerror}") from exc
    return matrix_from_json(obj)
