"""Reading and writing matrix files.

JSON is the canonical format::

    {"rows": 2, "cols": 2, "entries": [[1, 0], [0, 0], [0, 0], [0.5, -1]]}

with ``entries`` a flat row-major list of ``[re, im]`` pairs.  CSV files
hold one matrix row per line; cells are real numbers or complex numbers
written ``a+bi``.
"""

from __future__ import annotations

import csv
import io
import json
import re
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np
from referencing import Registry, Resource

from .errors import InvalidInput


class MatrixParseError(InvalidInput):
    """A matrix file could not be parsed."""


_SCHEMAS: dict = {}


def load_schema(name: str) -> dict:
    if name not in _SCHEMAS:
        text = resources.files("relkit").joinpath("schemas", f"{name}.schema.json").read_text()
        _SCHEMAS[name] = json.loads(text)
    return _SCHEMAS[name]


def _registry() -> Registry:
    if "_registry" not in _SCHEMAS:
        docs = [load_schema(n) for n in _schema_names()]
        _SCHEMAS["_registry"] = Registry().with_resources(
            (d["$id"], Resource.from_contents(d)) for d in docs
        )
    return _SCHEMAS["_registry"]


def validate(document, schema: str) -> None:
    """Validate against one of the bundled schemas, resolving ``$ref`` between them.

    Raises ``jsonschema.ValidationError``.
    """
    validator = jsonschema.Draft202012Validator(load_schema(schema), registry=_registry())
    validator.validate(document)


def _schema_names():
    folder = resources.files("relkit").joinpath("schemas")
    return sorted(p.name[: -len(".schema.json")] for p in folder.iterdir() if p.name.endswith(".schema.json"))


def matrix_to_json(M) -> dict:
    A = np.asarray(M, dtype=complex)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    entries = [[float(z.real), float(z.imag)] for z in A.ravel()]
    return {"rows": int(A.shape[0]), "cols": int(A.shape[1]), "entries": entries}


def matrix_from_json(doc) -> np.ndarray:
    try:
        validate(doc, "matrix")
    except jsonschema.ValidationError as exc:
        raise MatrixParseError(f"not a matrix document: {exc.message}") from None
    rows, cols, entries = doc["rows"], doc["cols"], doc["entries"]
    if len(entries) != rows * cols:
        raise MatrixParseError(f"expected {rows * cols} entries, found {len(entries)}")
    values = np.array([complex(re_, im) for re_, im in entries], dtype=complex) if entries else np.zeros(0, complex)
    if not np.all(np.isfinite(values)):
        raise MatrixParseError("matrix has non-finite entries")
    return values.reshape(rows, cols)


_CELL = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def parse_cell(cell: str) -> complex:
    """Parse ``"1.5"``, ``"-2i"``, ``"1-0.5i"`` and the like."""
    s = cell.strip().replace(" ", "").lower()
    if not s:
        raise MatrixParseError("empty cell")
    if s.endswith("i") or s.endswith("j"):
        s = s[:-1] + "j"
        if s in ("j", "+j", "-j"):
            s = s[:-1] + "1j"
        elif s[-2] in "+-":
            s = s[:-1] + "1j"
    elif not _CELL.match(s):
        raise MatrixParseError(f"cannot parse cell {cell!r}")
    try:
        z = complex(s)
    except ValueError:
        raise MatrixParseError(f"cannot parse cell {cell!r}") from None
    if not np.isfinite(z):
        raise MatrixParseError(f"non-finite cell {cell!r}")
    return z


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise MatrixParseError("CSV file holds no rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise MatrixParseError("CSV rows have different lengths")
    return np.array([[parse_cell(c) for c in r] for r in rows], dtype=complex)


def read_matrix(path) -> np.ndarray:
    """Read a JSON or CSV matrix file; raises MatrixParseError on any failure."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise MatrixParseError(f"cannot read {path}: {exc.strerror}") from None
    if path.suffix.lower() == ".csv":
        return matrix_from_csv(text)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        if path.suffix.lower() == ".json":
            raise MatrixParseError(f"{path}: invalid JSON ({exc.msg})") from None
        return matrix_from_csv(text)
    return matrix_from_json(doc)


def write_matrix(path, M) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(M)) + "\n")
