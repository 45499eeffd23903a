import csv
import json
import time

import numpy as np
import pytest

from rmlm.cli import main
from rmlm.fixtures import FIGURE2_EDGES, chain3, confounder3, triangle3
from rmlm.io import read_matrix_csv, write_dag_csv
from rmlm.simulation import sample_rmlm
from rmlm.tropical import ml_matrix, standardize


@pytest.fixture
def dag_file(tmp_path):
    def make(dag, name="dag.csv"):
        path = tmp_path / name
        write_dag_csv(dag, path)
        return str(path)
    return make


@pytest.fixture
def data_file(tmp_path):
    A = standardize(ml_matrix(chain3()))
    X = sample_rmlm(A, 1500, 2, np.random.default_rng(0))
    path = tmp_path / "data.csv"
    np.savetxt(path, X, delimiter=",", header="a,b,c", comments="")
    return str(path)


def run(*args):
    return main([str(a) for a in args])


def test_oracle_chain(tmp_path, dag_file):
    assert run("oracle", dag_file(chain3()), "--out", tmp_path / "o") == 0
    doc = json.loads((tmp_path / "o" / "oracle.json").read_text())
    assert [1, 2] in doc["mwp"]
    rec = next(p for p in doc["pairs"] if (p["i"], p["m"]) == (1, 2))
    assert rec["mwp_truth"] and rec["sigmaT"] == pytest.approx(1, abs=1e-12)
    assert (tmp_path / "o" / "manifest.json").exists()


def test_oracle_edgeless_and_direct_edge(tmp_path, dag_file):
    from rmlm.graph import EdgeWeightDag
    run("oracle", dag_file(EdgeWeightDag(np.eye(3)), "e.csv"), "--out", tmp_path / "e")
    assert json.loads((tmp_path / "e" / "oracle.json").read_text())["mwp"] == []
    run("oracle", dag_file(triangle3(c13=0.95), "t.csv"), "--out", tmp_path / "t")
    assert [1, 2] not in json.loads((tmp_path / "t" / "oracle.json").read_text())["mwp"]


def test_reduce_refusal_and_success(tmp_path, dag_file):
    from rmlm.fixtures import figure2
    path = dag_file(figure2())
    obs = "1,2,3,4,6,8,9,10"
    assert run("reduce", path, "--observed", obs, "--out", tmp_path / "r") == 5
    report = json.loads((tmp_path / "r" / "report.json").read_text())
    assert {"clause": "(i)(a)", "nodes": ["8", "9", "11"]} in report["violations"]
    assert (tmp_path / "r" / "manifest.json").exists()

    assert run("reduce", path, "--observed", ",".join(map(str, range(1, 13))), "--out", tmp_path / "f") == 0
    labels, red = read_matrix_csv(tmp_path / "f" / "reduced.csv")
    np.testing.assert_allclose(red, ml_matrix(figure2()))


def test_reduce_triangle_closed_form(tmp_path, dag_file):
    assert run("reduce", dag_file(triangle3()), "--observed", "1,2", "--out", tmp_path / "r") == 0
    _, red = read_matrix_csv(tmp_path / "r" / "reduced.csv")
    A = ml_matrix(triangle3())
    assert red[1, 1] == pytest.approx(np.hypot(A[1, 1], A[1, 2]))


def test_detect_and_rerun(tmp_path, data_file, capsys):
    out = tmp_path / "d"
    assert run("detect", data_file, "--out", out, "--k1", 300, "--k2", 100, "--threads", 1) == 0
    names = {"C1.csv", "D1.csv", "D2.csv", "D3.csv", "D4.csv", "P.csv", "Pstar.csv",
             "D2_heatmap.csv", "edges.csv", "diagnostics.txt", "manifest.json"}
    assert names <= {p.name for p in out.iterdir()}
    labels, P = read_matrix_csv(out / "P.csv")
    assert labels == ["a", "b", "c"]
    with open(out / "edges.csv") as fh:
        assert next(csv.reader(fh)) == ["source", "target", "kind"]
    assert run("rerun", out / "manifest.json", "--out", tmp_path / "d2") == 0
    assert "identical" in capsys.readouterr().out


def test_detect_input_errors(tmp_path):
    one = tmp_path / "one.csv"
    one.write_text("a\n" + "\n".join(str(x) for x in range(100)) + "\n")
    assert run("detect", one, "--out", tmp_path / "x") == 4
    text = tmp_path / "text.csv"
    text.write_text("a,b\n1,2\n3,oops\n")
    assert run("detect", text, "--out", tmp_path / "x") == 3
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("a,b\n1,2\n3\n")
    assert run("detect", ragged, "--out", tmp_path / "x") == 2
    small = tmp_path / "small.csv"
    small.write_text("a,b\n" + "\n".join(f"{x},{x * x}" for x in range(50)) + "\n")
    assert run("detect", small, "--out", tmp_path / "x") == 4
    assert run("detect", small, "--out", tmp_path / "x", "--k1", 20, "--k2", 30) == 4


def test_bad_flags_exit_with_parameter_code(tmp_path, data_file):
    with pytest.raises(SystemExit) as exc:
        run("detect", data_file, "--out", tmp_path / "x", "--k1", "many")
    assert exc.value.code == 4
    assert run("detect", data_file, "--out", tmp_path / "x", "--a", 0.5) == 4


def test_bench_small_and_rerun(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"d": 6, "p": 0.3, "n": 1000, "reps": 2, "k1": 200, "k2": 100}))
    out = tmp_path / "b"
    assert run("bench", cfg, "--out", out, "--seed", 4, "--threads", 1) == 0
    with open(out / "metrics.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2 and rows[0]["TPR_den"] != ""
    resolved = json.loads((out / "config.resolved.json").read_text())
    assert resolved["seed"] == 4
    assert run("rerun", out / "manifest.json", "--out", tmp_path / "b2") == 0


def test_bench_rejects_bad_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"p": 1.5}))
    assert run("bench", cfg, "--out", tmp_path / "b") == 4
    cfg.write_text("{not json")
    assert run("bench", cfg, "--out", tmp_path / "b") == 2


@pytest.mark.slow
def test_bench_single_rep_smoke_under_ten_seconds(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"d": 20, "p": 0.1, "n": 1000, "reps": 1}))
    t0 = time.perf_counter()
    assert run("bench", cfg, "--out", tmp_path / "b", "--preset", "paper-1000", "--threads", 1) == 0
    assert time.perf_counter() - t0 < 10


def test_rerun_detects_changed_input(tmp_path, dag_file, capsys):
    path = dag_file(chain3())
    run("oracle", path, "--out", tmp_path / "o")
    write_dag_csv(confounder3(), path)
    assert run("rerun", tmp_path / "o" / "manifest.json", "--out", tmp_path / "o2") == 1
    assert "differ" in capsys.readouterr().err
