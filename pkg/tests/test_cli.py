import csv
import io as _io
import json
import os
from pathlib import Path

import pytest

from specind import cli

GOLDEN = Path(__file__).parent / "golden"
SUBCOMMANDS = ["analyze", "verify", "sample", "reliability", "sweep"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out.strip() else None, err


# help text

def _help(capsys, monkeypatch, argv):
    monkeypatch.setenv("COLUMNS", "100")
    assert cli.main(argv + ["--help"]) == 0
    return capsys.readouterr().out


@pytest.mark.parametrize("cmd", [None] + SUBCOMMANDS)
def test_help_matches_golden(capsys, monkeypatch, cmd):
    text = _help(capsys, monkeypatch, [] if cmd is None else [cmd])
    path = GOLDEN / f"help_{cmd or 'main'}.txt"
    if os.environ.get("SPECIND_UPDATE_GOLDEN"):
        path.write_text(text)
    assert text == path.read_text()


@pytest.mark.parametrize("cmd", SUBCOMMANDS)
def test_help_documents_defaults(capsys, monkeypatch, cmd):
    text = _help(capsys, monkeypatch, [cmd])
    assert "--seed" in text and "default" in text


def test_bad_flag_exits_two(capsys):
    assert cli.main(["analyze", "--lambda", "-1", "--graph", "edge"]) == 2
    assert cli.main(["nope"]) == 2
    assert cli.main(["sample", "--matroid", "graphic-triangle", "--steps", "-5"]) == 2


# analyze

def test_analyze_triangle(capsys):
    code, doc, _ = run_json(capsys, "analyze", "--graph", "triangle", "--lambda", "1")
    assert code == 0
    assert doc["n"] == 3 and doc["support_size"] == 4
    for key in ("eta", "b", "local_gaps", "block_gaps", "glauber", "random_walk_bound"):
        assert key in doc
    gammas = [g["gamma"] for g in doc["local_gaps"]] + [b["gamma"] for b in doc["block_gaps"]]
    assert all(isinstance(x, float) for x in gammas + [doc["eta"]])


def test_analyze_deterministic(capsys):
    a = run(capsys, "analyze", "--graph", "cycle5", "--lambda", "1/2", "--eps", "0.125")[1]
    b = run(capsys, "analyze", "--graph", "cycle5", "--lambda", "1/2", "--eps", "0.125")[1]
    assert a == b


def test_analyze_shattering(capsys):
    code, doc, _ = run_json(capsys, "analyze", "--graph", "path6", "--alpha", "1/3")
    assert code == 0 and doc["shattering"]["violations"] == 0


def test_analyze_malformed_json(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 3,\n "edges": [[0,1],]}')
    code, out, err = run(capsys, "analyze", "--graph", str(p))
    assert code == 2 and out == ""
    assert f"{p}:2:" in err


def test_analyze_cap(capsys):
    code, out, err = run(capsys, "analyze", "--graph", "path40")
    assert code == 3 and "cap" in err


def test_max_states_flag(capsys):
    code, _, err = run(capsys, "analyze", "--graph", "path6", "--max-states", "4")
    assert code == 3 and "raise the cap" in err


def test_analyze_table_and_csv(capsys, tmp_path):
    t = tmp_path / "t.csv"
    t.write_text("bits,weight\n00,1\n10,1\n01,1\n")
    code, out, _ = run(capsys, "analyze", "--table", str(t), "--csv")
    assert code == 0
    rows = list(csv.reader(_io.StringIO(out)))
    assert rows[0] == ["k", "gamma", "reducible"] and len(rows) == 2


def test_analyze_needs_input(capsys):
    assert run(capsys, "analyze")[0] == 2


def test_output_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, printed, _ = run(capsys, "analyze", "--graph", "edge", "-o", str(out))
    assert code == 0 and printed == ""
    assert json.loads(out.read_text())["n"] == 2


# verify

def test_verify_path3(capsys):
    code, doc, _ = run_json(capsys, "verify", "--spin", "path3", "--lambda", "1")
    assert code == 0 and doc["passed"] and doc["failures"] == []


def test_verify_graphic_k4(capsys):
    code, doc, _ = run_json(capsys, "verify", "--matroid", "graphic-K4")
    assert code == 0 and doc["passed"]


def test_verify_explicit_bad(capsys):
    code, doc, _ = run_json(capsys, "verify", "--matroid", "explicit-bad")
    assert code == 1 and not doc["passed"]
    assert doc["failures"][0]["name"] == "matroid_axioms"
    assert "[1]" in doc["failures"][0]["notes"]


def test_verify_inline_invalid_explicit(capsys):
    code, doc, _ = run_json(capsys, "verify", "--matroid", '{"kind": "explicit", "bases": [[1], [2, 3]]}')
    assert code == 1 and doc["witness"] == [[1], [2, 3]]


def test_verify_negative_tolerance_fails(capsys):
    code, doc, _ = run_json(capsys, "verify", "--spin", "edge", "--tolerance", "-0.01")
    assert code == 1 and doc["failures"]


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--spin", "edge", "--csv")
    rows = list(csv.reader(_io.StringIO(out)))
    assert code == 0 and rows[0][:3] == ["name", "instance", "status"]
    assert {r[2] for r in rows[1:]} <= {"pass", "skip"}


def test_verify_seed_replay(capsys):
    a = run(capsys, "verify", "--spin", "cycle5", "--seed", "5")[1]
    b = run(capsys, "verify", "--spin", "cycle5", "--seed", "5")[1]
    assert a == b


def test_verify_requires_one_input(capsys):
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "verify", "--spin", "edge", "--matroid", "graphic-K4")[0] == 2


# sample

def test_sample_matroid(capsys):
    code, doc, _ = run_json(capsys, "sample", "--matroid", "graphic-triangle", "--steps", "100000", "--seed", "3")
    assert code == 0 and doc["tv_to_uniform"] < 0.02


def test_sample_hardcore(capsys):
    code, doc, _ = run_json(capsys, "sample", "--hardcore", "path3", "--steps", "200000", "--seed", "1")
    assert code == 0 and doc["tv_to_exact"] < 0.02
    again = run_json(capsys, "sample", "--hardcore", "path3", "--steps", "200000", "--seed", "1")[1]
    assert again == doc


def test_sample_zero_steps(capsys):
    code, doc, _ = run_json(capsys, "sample", "--hardcore", "edge", "--steps", "0")
    assert code == 0 and doc["tv_to_exact"] is None and doc["final"] == doc["initial"]


def test_sample_trajectory_csv(capsys):
    code, out, _ = run(capsys, "sample", "--hardcore", "path3", "--steps", "10", "--csv")
    rows = list(csv.reader(_io.StringIO(out)))
    assert code == 0 and rows[0] == ["step", "v0", "v1", "v2"] and len(rows) == 12


# reliability

@pytest.mark.parametrize("matroid, p, want", [("graphic-triangle", "1/2", "1/2"), ("graphic-K4", "1", "1"),
                                              ("uniform-3-3", "0", "0")])
def test_reliability(capsys, matroid, p, want):
    code, doc, _ = run_json(capsys, "reliability", "--matroid", matroid, "--p", p)
    assert code == 0 and doc["match"]
    assert doc["dual_formula_exact"] == doc["direct_enumeration_exact"] == want


def test_reliability_bad_p(capsys):
    assert run(capsys, "reliability", "--matroid", "graphic-K4", "--p", "2")[0] == 2


def test_unknown_matroid_file(capsys):
    assert run(capsys, "reliability", "--matroid", "no-such-preset")[0] == 2


# sweep

def test_sweep_inline(capsys):
    cfg = json.dumps({"spin": [{"family": "path", "n": [2, 3], "lambda": [1, 2]}], "matroid": ["uniform-4-2"]})
    code, doc, _ = run_json(capsys, "sweep", "--config", cfg)
    assert code == 0 and doc["summary"]["instances"] == 5 and doc["summary"]["passed"] == 5


def test_sweep_failure_exit(capsys, tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"matroid": ["explicit-bad"]}))
    code, doc, _ = run_json(capsys, "sweep", "--config", str(p))
    assert code == 1 and doc["summary"]["failed"][0]["label"] == "explicit-bad"


def test_sweep_empty(capsys):
    code, doc, _ = run_json(capsys, "sweep", "--config", "{}")
    assert code == 0 and doc["reports"] == []


@pytest.mark.parametrize("cfg", ["[1, 2]", '{"spin": [{"family": "moebius", "n": 3}]}', "{bad"])
def test_sweep_bad_config(capsys, cfg):
    assert run(capsys, "sweep", "--config", cfg)[0] == 2
