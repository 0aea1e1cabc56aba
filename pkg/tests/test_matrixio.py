import json

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.extra import numpy as hnp
from hypothesis import strategies as st

from relkit.matrixio import (
    MatrixParseError,
    load_schema,
    matrix_from_csv,
    matrix_from_json,
    matrix_to_json,
    parse_cell,
    read_matrix,
    validate,
    write_matrix,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=50, deadline=None)
@given(hnp.arrays(np.complex128, hnp.array_shapes(min_dims=2, max_dims=2, max_side=5),
                  elements=st.builds(complex, finite, finite)))
def test_json_round_trip_is_exact(M):
    doc = json.loads(json.dumps(matrix_to_json(M)))
    assert np.array_equal(matrix_from_json(doc), M)


def test_file_round_trip(tmp_path):
    M = np.array([[1 + 2j, 0], [0.5, -1j]])
    write_matrix(tmp_path / "m.json", M)
    assert np.array_equal(read_matrix(tmp_path / "m.json"), M)


@pytest.mark.parametrize(
    "doc",
    [
        {"rows": 2, "cols": 1, "entries": [[1, 0]]},
        {"rows": 1, "cols": 1, "entries": [[1]]},
        {"rows": 0, "cols": 1, "entries": []},
        {"rows": 1, "cols": 1, "entries": [["a", 0]]},
        {"rows": 1, "cols": 1},
        [[1, 0]],
    ],
    ids=["count", "pair-length", "zero-rows", "non-number", "missing-entries", "not-object"],
)
def test_bad_json_documents(doc):
    with pytest.raises(MatrixParseError):
        matrix_from_json(doc)


def test_non_finite_json_entries(tmp_path):
    (tmp_path / "m.json").write_text('{"rows": 1, "cols": 1, "entries": [[NaN, 0]]}')
    with pytest.raises(MatrixParseError):
        read_matrix(tmp_path / "m.json")


@pytest.mark.parametrize(
    "cell, value",
    [("1.5", 1.5), ("-2", -2), ("1e-3", 1e-3), ("2i", 2j), ("-i", -1j), ("1-0.5i", 1 - 0.5j), ("3+j", 3 + 1j)],
)
def test_parse_cell(cell, value):
    assert parse_cell(cell) == value


@pytest.mark.parametrize("cell", ["", "abc", "nan", "inf", "1+"])
def test_parse_cell_rejects(cell):
    with pytest.raises(MatrixParseError):
        parse_cell(cell)


def test_csv_matrix():
    M = matrix_from_csv("1,0\n0,0.5\n\n")
    assert np.array_equal(M, np.diag([1, 0.5]))


def test_csv_ragged_rows():
    with pytest.raises(MatrixParseError):
        matrix_from_csv("1,2\n3\n")


def test_csv_by_suffix_and_by_fallback(tmp_path):
    (tmp_path / "m.csv").write_text("1,2\n3,4\n")
    (tmp_path / "m.txt").write_text("1,2\n3,4\n")
    assert np.array_equal(read_matrix(tmp_path / "m.csv"), read_matrix(tmp_path / "m.txt"))


def test_missing_file(tmp_path):
    with pytest.raises(MatrixParseError):
        read_matrix(tmp_path / "absent.json")


@pytest.mark.parametrize(
    "name", ["matrix", "subspace", "relation", "tolerances", "relation-report", "pair-report",
             "complement-report", "verify-report"],
)
def test_shipped_schemas_are_valid(name):
    jsonschema.Draft202012Validator.check_schema(load_schema(name))


def test_validate_rejects_extra_keys():
    with pytest.raises(jsonschema.ValidationError):
        validate({"rows": 1, "cols": 1, "entries": [[0, 0]], "extra": 1}, "matrix")
