import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from softlin.cli import (
    Options,
    Report,
    SceneError,
    dump_scene,
    emit_report,
    execute,
    load_report,
    parse_scene,
    parse_scene_text,
    scene_from_dict,
)
from softlin.cli.main import main

SCENES = Path(__file__).resolve().parent.parent / "scenes"


def scene(objects=None, tasks=None, params=("a", "b"), dim=3):
    return {"schema": 1, "parameters": list(params), "dimension": dim,
            "objects": objects or {}, "tasks": tasks or []}


def run(doc, opts=None):
    return execute(scene_from_dict(doc), opts or Options())


def test_minimal_scene_is_valid():
    s = scene_from_dict({"parameters": ["a"], "dimension": 1, "objects": {}, "tasks": []})
    assert s.tasks == [] and s.objects == {}
    rep = execute(s)
    assert emit_report(rep, "json") == b'{"tasks":[]}\n'
    assert emit_report(rep, "text").startswith(b"0 tasks")
    assert rep.exit_code == 0


def test_undeclared_reference_names_object_and_task():
    doc = scene(tasks=[{"kind": "independence", "vectors": ["x"]}])
    with pytest.raises(SceneError) as err:
        scene_from_dict(doc)
    text = " ".join(f"{p}: {m}" for p, m in err.value.diagnostics)
    assert "'x'" in text and "tasks[0]" in text


def test_duplicate_object_name_rejected():
    text = ('{"schema": 1, "parameters": ["a"], "dimension": 1, "objects": {'
            '"v": {"type": "soft_vector", "constant": [1]}, "v": {"type": "soft_vector", "constant": [2]}},'
            '"tasks": []}')
    with pytest.raises(SceneError, match="duplicate"):
        parse_scene_text(text)


def test_unknown_kind_and_dimension_clash():
    with pytest.raises(SceneError):
        scene_from_dict(scene(tasks=[{"kind": "prove_everything"}]))
    with pytest.raises(SceneError):
        scene_from_dict(scene({"v": {"type": "soft_vector", "constant": [1, 2]}}))


def test_remark_scene_is_dependent():
    rep = execute(parse_scene(SCENES / "remark.json"))
    (task,) = rep.tasks
    assert task.status == "pass" and task.outcome == "dependent"
    assert task.result["witness_parameter"] == "1"


def test_equivalence_p1_pinf():
    doc = scene({"P1": {"type": "norm_family", "constant": "P1"},
                 "PInf": {"type": "norm_family", "constant": "PInf"}},
                [{"kind": "equivalence", "norm": "P1", "other": "PInf"}])
    res = run(doc).tasks[0].result
    assert all(abs(v - 1) <= 1e-9 for v in res["a"].values())
    assert all(abs(v - 3) <= 1e-9 for v in res["b"].values())


def test_convergence_of_inverse_n():
    doc = scene({"P2": {"type": "norm_family", "constant": "P2"},
                 "inv": {"type": "sequence", "form": "generated", "inv_n": {"constant": [1, 1, 1]}}},
                [{"kind": "convergence", "sequence": "inv", "norm": "P2"}])
    t = run(doc).tasks[0]
    assert t.status == "pass" and t.outcome == "converged"
    assert all(abs(x) < 1e-3 for row in t.result["limit"].values() for x in row)


def _ball_scene(kind, expect=None):
    task = {"kind": "convexity", "region": "r"}
    if expect:
        task["expect"] = expect
    return scene({"P2": {"type": "norm_family", "constant": "P2"},
                  "o": {"type": "soft_vector", "constant": [0, 0, 0]},
                  "r": {"type": "region", "shape": "ball", "norm": "P2", "center": "o", "radius": 1, "ball": kind}},
                 [task])


def test_exit_codes():
    assert run(_ball_scene("closed")).exit_code == 0
    bad = run(_ball_scene("sphere"))
    assert bad.exit_code == 1
    assert bad.tasks[0].result["counterexample"] is not None
    assert b"    counterexample: {" in emit_report(bad, "text")
    assert run(_ball_scene("sphere", expect="counterexample")).exit_code == 0
    full = scene({"P2": {"type": "norm_family", "constant": "P2"},
                  "all": {"type": "soft_set", "kind": "subspace",
                          "bases": {"constant": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}}},
                 [{"kind": "riesz", "norm": "P2", "space": "all"}])
    rep = run(full)
    assert rep.tasks[0].status == "error" and rep.exit_code == 2


def test_tour_scene_passes_and_is_deterministic():
    s = parse_scene(SCENES / "tour.json")
    first = emit_report(execute(s), "json")
    second = emit_report(execute(parse_scene(SCENES / "tour.json")), "json")
    assert first == second
    rep = load_report(first)
    assert isinstance(rep, Report) and rep.exit_code == 0
    assert emit_report(rep, "json") == first
    assert {t.kind for t in rep.tasks} >= {
        "norm_axioms", "metric_axioms", "independence", "independence_constant", "equivalence", "riesz",
        "convergence", "cauchy", "limit", "convexity", "set_algebra", "subspace_check"}


@pytest.mark.parametrize("name", ["tour.json", "remark.json"])
def test_scene_normal_form_round_trip(name):
    s = parse_scene(SCENES / name)
    again = parse_scene_text(dump_scene(s))
    assert again == s
    assert dump_scene(again) == dump_scene(s)


def test_main_verbs(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["report", str(SCENES / "remark.json"), "-o", str(out)]) == 0
    assert json.loads(out.read_text())["tasks"][0]["outcome"] == "dependent"
    assert main(["check", str(SCENES / "remark.json")]) == 0
    assert "1 tasks" in capsys.readouterr().out
    broken = tmp_path / "bad.json"
    broken.write_text('{"parameters": ["a"], "dimension": 1, "objects": {}, "tasks": [')
    assert main(["check", str(broken)]) == 2
    assert "bad.json" in capsys.readouterr().err


def test_seed_from_environment(tmp_path):
    env = dict(os.environ, SOFTLIN_SEED="not-a-number")
    proc = subprocess.run([sys.executable, "-m", "softlin", "check", str(SCENES / "remark.json")],
                          capture_output=True, text=True, env=env)
    assert proc.returncode != 0 and "SOFTLIN_SEED" in proc.stderr
    env["SOFTLIN_SEED"] = "5"
    proc = subprocess.run([sys.executable, "-m", "softlin", "report", str(SCENES / "remark.json")],
                          capture_output=True, env=env)
    assert proc.returncode == 0
