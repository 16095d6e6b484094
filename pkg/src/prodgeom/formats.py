"""JSON file formats shared by the CLI and the fixture corpus.

density matrix  {"levels": N, "qudits": M, "matrix": [[[re, im], ...], ...]}
Fano tensor     {"levels": N, "qudits": M, "data": [...]}   (row-major, i_1 first)
point           {"case": name, "u": [...]}  (+ levels/qudits/partition for "general")

Floats are written with ``repr`` precision, which round-trips every double.
"""

import json
import sys

import numpy as np

from .fano import DensityMatrix, FanoTensor, ShapeError


class FormatError(ValueError):
    pass


def matrix_to_json(mat):
    mat = np.asarray(mat, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


def matrix_from_json(rows):
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError("matrix must be a nested list of [re, im] pairs") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise FormatError(f"matrix must have shape (D, D, 2), got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def density_to_json(rho):
    return {"levels": rho.levels, "qudits": rho.qudits, "matrix": matrix_to_json(rho.matrix)}


def density_from_json(obj):
    try:
        levels, qudits = int(obj["levels"]), int(obj["qudits"])
        mat = matrix_from_json(obj["matrix"])
    except KeyError as exc:
        raise FormatError(f"density-matrix file is missing field {exc}") from exc
    return DensityMatrix(levels, qudits, mat)


def tensor_to_json(d):
    return {"levels": d.levels, "qudits": d.qudits, "data": [float(x) for x in d.data]}


def tensor_from_json(obj):
    try:
        return FanoTensor(int(obj["levels"]), int(obj["qudits"]), np.asarray(obj["data"], float))
    except KeyError as exc:
        raise FormatError(f"Fano-tensor file is missing field {exc}") from exc


def point_to_json(case, u):
    out = {"case": case.name, "u": [float(x) for x in u]}
    if case.name == "general":
        out.update(levels=case.levels, qudits=case.qudits, partition=str(case.partition))
    return out


def load_json(path):
    """Read JSON from ``path`` (``-`` for stdin)."""
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def dumps(obj):
    return json.dumps(obj, indent=1) + "\n"


def write_json(obj, path=None):
    text = dumps(obj)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def read_state(obj):
    """Density matrix or Fano tensor, whichever the JSON object holds."""
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object")
    if "matrix" in obj:
        return density_from_json(obj)
    if "data" in obj:
        return tensor_from_json(obj)
    raise FormatError("JSON object has neither 'matrix' nor 'data'")


__all__ = [
    "FormatError",
    "ShapeError",
    "density_from_json",
    "density_to_json",
    "dumps",
    "load_json",
    "matrix_from_json",
    "matrix_to_json",
    "point_to_json",
    "read_state",
    "tensor_from_json",
    "tensor_to_json",
    "write_json",
]
