import io
import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from relkit import cli
from relkit.matrixio import validate, write_matrix
from relkit.subspace import DEFAULT_TOL


def run(args):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(args, out=out, err=err)
    text = out.getvalue()
    return code, (json.loads(text) if text else None), err.getvalue()


@pytest.fixture
def files(tmp_path):
    def make(**mats):
        paths = {}
        for name, M in mats.items():
            paths[name] = str(tmp_path / f"{name}.json")
            write_matrix(paths[name], M)
        return paths
    return make


GRAPH = np.array([[1, 0], [0, 0], [1, 0], [0, 1]], dtype=float)


def test_relation_report_validates(files):
    f = files(g=GRAPH)
    code, rep, _ = run(["decompose-relation", "--graph", f["g"], "--dim-h", "2"])
    assert code == 0
    validate(rep, "relation-report")
    assert rep["T"]["dims"] == {"dom": 1, "ran": 2, "ker": 0, "mul": 1}
    assert rep["T1"]["dims"]["mul"] == 0


def test_relation_from_pair_files(files):
    f = files(phi=np.diag([1.0, 0.0]), psi=np.eye(2))
    code, rep, _ = run(["decompose-relation", "--phi", f["phi"], "--psi", f["psi"]])
    assert code == 0 and rep["T"]["dims"]["mul"] == 1


def test_relation_overlap_section(files):
    f = files(g=GRAPH, k=np.diag([0.5, 1.0]))
    code, rep, _ = run(["decompose-relation", "--graph", f["g"], "--dim-h", "2", "--k", f["k"]])
    assert code == 2
    assert rep["overlap"]["direct"]["dim"] == 1 and rep["overlap"]["distance"] < 1e-12
    assert rep["conditions"]["conditions_agree"]


@pytest.mark.parametrize(
    "args",
    [
        ["decompose-relation"],
        ["decompose-relation", "--graph", "x.json"],
        ["frobnicate"],
        ["verify", "--seed", "-1"],
        ["verify", "--max-dim", "0"],
        ["verify", "--property", "no-such-property"],
    ],
)
def test_usage_errors_exit_3(args):
    code, rep, err = run(args)
    assert code == 3 and rep is None and err.startswith("relkit:")


def test_graph_dimension_mismatch_exits_4(files):
    f = files(g=GRAPH)
    code, _, _ = run(["decompose-relation", "--graph", f["g"], "--dim-h", "5"])
    assert code == 4


def test_k_of_wrong_size_exits_4(files):
    f = files(g=GRAPH, k=np.eye(3) / 2)
    code, _, _ = run(["decompose-relation", "--graph", f["g"], "--dim-h", "2", "--k", f["k"]])
    assert code == 4


def test_non_contraction_k_exits_5(files):
    f = files(phi=np.eye(2), psi=np.eye(2), k=np.diag([2.0, 0.0]))
    code, _, _ = run(["decompose-pair", "--phi", f["phi"], "--psi", f["psi"], "--k", f["k"]])
    assert code == 5


def test_pair_report_validates(files):
    f = files(phi=np.diag([1.0, 0.0]), psi=np.eye(2), k=np.diag([0.0, 1.0]))
    code, rep, _ = run(["decompose-pair", "--phi", f["phi"], "--psi", f["psi"], "--k", f["k"]])
    assert code == 0 and rep["K_source"] == "given"
    validate(rep, "pair-report")
    assert rep["radon_nikodym_residual"] < 1e-12


def test_pair_without_regular_part_has_no_derivative(files):
    f = files(phi=np.zeros((2, 2)), psi=np.eye(2))
    code, rep, _ = run(["decompose-pair", "--phi", f["phi"], "--psi", f["psi"]])
    assert code == 0 and rep["radon_nikodym"] is None


def test_complement_report_validates(files):
    f = files(x=np.diag([0.5, 1.0, 0.0]))
    code, rep, _ = run(["complement", "-x", f["x"]])
    assert code == 0
    validate(rep, "complement-report")
    assert rep["identities"]["passed"] and rep["overlap"]["basis"]["dim"] == 1


def test_complement_accepts_csv(tmp_path):
    (tmp_path / "x.csv").write_text("0.5,0\n0,0.25\n")
    code, rep, _ = run(["complement", "--x", str(tmp_path / "x.csv")])
    assert code == 0 and rep["n"] == 2


def test_verify_failure_exit_code(monkeypatch):
    from relkit import properties
    from relkit.properties import Outcome
    monkeypatch.setitem(properties.PROPERTIES, "test.always-fails", lambda rng, d, tol: Outcome(False, 1.0))
    code, rep, _ = run(["verify", "--trials", "2", "--property", "test."])
    assert code == 1 and not rep["all_passed"]
    assert rep["properties"]["test.always-fails"]["failures"] == [0, 1]


def test_verify_property_filter():
    code, rep, _ = run(["verify", "--trials", "2", "--property", "subspace."])
    assert code == 0 and all(k.startswith("subspace.") for k in rep["properties"])
    validate(rep, "verify-report")


def test_tolerance_environment_variable(monkeypatch, files):
    monkeypatch.setenv("RELKIT_TOLERANCE", "1e-7")
    f = files(x=np.eye(2) / 2)
    code, rep, _ = run(["complement", "--x", f["x"]])
    assert code == 0 and rep["tolerances"]["member"] == 1e-7
    assert rep["tolerances"]["rank"] == DEFAULT_TOL.rank


@pytest.mark.parametrize("value", ["abc", "-1", "0"])
def test_bad_tolerance_environment_variable(monkeypatch, value):
    monkeypatch.setenv("RELKIT_TOLERANCE", value)
    code, _, err = run(["verify", "--trials", "1"])
    assert code == 3 and "RELKIT_TOLERANCE" in err


def test_console_script():
    exe = shutil.which("relkit")
    cmd = [exe] if exe else [sys.executable, "-m", "relkit"]
    proc = subprocess.run(cmd + ["verify", "--trials", "0"], capture_output=True, text=True)
    assert proc.returncode == 3
