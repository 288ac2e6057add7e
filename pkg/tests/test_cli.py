import csv
import json
import subprocess
import sys

import pytest

from tdl.cli import main


def run(tmp_path, *argv, fmt="csv"):
    out = tmp_path / f"out.{fmt}"
    code = main(list(argv) + ["--jobs", "1", "--format", fmt, "--out", str(out)])
    body = out.read_text() if out.exists() else ""
    return code, body


def test_census_csv(tmp_path):
    code, body = run(tmp_path, "census", "--n", "5", "--family", "oriented", "--pattern", "T:3",
                     "--predicates", "k-partite:2,acyclic")
    assert code == 0
    rows = {r["predicate"]: r for r in csv.DictReader(body.splitlines())}
    assert rows["total"]["count"] == "9735"
    assert rows["k-partite:2"]["count"] == "5881"
    manifest = json.loads((tmp_path / "out.csv.manifest.json").read_text())
    assert manifest["command"] == "census" and manifest["jobs"] == 1
    assert "budget" in manifest and "wall_seconds" in manifest


def test_census_no_pattern(tmp_path):
    code, body = run(tmp_path, "census", "--n", "4", "--family", "oriented")
    assert code == 0 and "total,729,729" in body


def test_census_range_json(tmp_path):
    code, body = run(tmp_path, "census", "--n", "2..3", "--pattern", "C:3", fmt="json")
    docs = json.loads(body)
    assert [d["n"] for d in docs] == [2, 3] and docs[1]["total"] == "25"


def test_budget_refusal_exit_code(tmp_path):
    code, body = run(tmp_path, "census", "--n", "30", "--family", "digraph", "--pattern", "C:3")
    assert code == 3
    assert "budget" in body


def test_budget_flag(tmp_path):
    code, _ = run(tmp_path, "census", "--n", "4", "--budget", "desk,census_space=100")
    assert code == 3
    code, _ = run(tmp_path, "census", "--n", "4", "--budget", "nonsense")
    assert code == 2


def test_env_budget(tmp_path):
    env = {"TDL_BUDGET": "desk,extremal_digraph_n=4", "PATH": "", "PYTHONPATH": ":".join(sys.path)}
    res = subprocess.run([sys.executable, "-m", "tdl.cli", "extremal", "--n", "5", "--pattern", "C:3"],
                         env=env, capture_output=True, text=True)
    assert res.returncode == 3


@pytest.mark.parametrize("argv", [
    ["census", "--n", "4", "--pattern", "Q:3"],
    ["census", "--n", "x"],
    ["extremal", "--n", "4", "--pattern", "C:3", "--weight", "3"],
    ["census", "--n", "4", "--predicates", "cube"],
    ["census", "--n", "4", "--samples", "0"],
    ["partition", "--graph", "3;0->1"],
    ["frobnicate"],
])
def test_usage_errors(tmp_path, argv):
    assert main(argv + ["--out", str(tmp_path / "x")] if argv[0] != "frobnicate" else argv) == 2


def test_extremal_example(tmp_path):
    code, body = run(tmp_path, "extremal", "--n", "5", "--pattern", "C:3", "--family", "digraph", "--weight", "2",
                     fmt="json")
    assert code == 0
    doc = json.loads(body)[0]
    assert doc["value"] == "12" and doc["optimum_f2"] == 6
    assert "node_count" not in doc
    manifest = json.loads((tmp_path / "out.json.manifest.json").read_text())
    assert manifest["node_count"]["5"] > 0


def test_extremal_stability(tmp_path):
    code, body = run(tmp_path, "extremal", "--n", "5", "--pattern", "T:3", "--stability", "1", fmt="json")
    assert code == 0
    assert json.loads(body)[0]["stability"]["max_distance"] == 1


def test_fas(tmp_path):
    code, body = run(tmp_path, "fas", "--graph", "3;0->1,1->2,2->0")
    row = next(csv.DictReader(body.splitlines()))
    assert code == 0 and row["beta"] == "1" and row["order"] == "0 1 2"
    code, body = run(tmp_path, "fas", "--graph", "3:241")
    assert code == 0


def test_partition_and_distance(tmp_path):
    code, body = run(tmp_path, "partition", "--graph", "4;0->1,1->2,2->3,3->0", "--k", "2")
    assert code == 0 and next(csv.DictReader(body.splitlines()))["non_crossing"] == "0"
    code, body = run(tmp_path, "partition", "--graph", "3;0->1,1->2,2->0", "--distance", "blowup")
    assert code == 0 and next(csv.DictReader(body.splitlines()))["distance"] == "1"


def test_containers(tmp_path):
    code, body = run(tmp_path, "containers", "--n", "8", "--pattern", "T:3", fmt="json")
    assert code == 0 and json.loads(body)["pass"]
    code, body = run(tmp_path, "containers", "--n", "4", "--pattern", "C:3", "--tau", "1")
    assert code == 0 and next(csv.DictReader(body.splitlines()))["delta"] == "3.0"


def test_switch(tmp_path):
    code, body = run(tmp_path, "switch", "--n", "5", "--m1", "1", "--m2", "1")
    assert code == 0
    assert [r["check"] for r in csv.DictReader(body.splitlines())] == ["forward", "backward", "ratio"]


def test_verify_subset(tmp_path):
    code, body = run(tmp_path, "verify", "--suite", "7,8")
    assert code == 0
    assert [r["pass"] for r in csv.DictReader(body.splitlines())] == ["True", "True"]


def test_verify_failure_exit_code(tmp_path):
    code, body = run(tmp_path, "verify", "--suite", "10")
    assert code == 4


def test_stdout_when_no_out(capsys):
    assert main(["fas", "--graph", "2;0->1", "--jobs", "1"]) == 0
    assert capsys.readouterr().out.startswith("graph,beta")


def test_jobs_do_not_change_bodies():
    from tdl.acceptance import criterion_11
    cmds = [["census", "--n", "5", "--pattern", "C:3", "--predicates", "beta,acyclic"],
            ["census", "--n", "6", "--pattern", "C:3", "--samples", "3000", "--seed", "5"],
            ["extremal", "--n", "5", "--pattern", "T:3"]]
    res = criterion_11(cmds)
    assert res["pass"], res["differing"]
