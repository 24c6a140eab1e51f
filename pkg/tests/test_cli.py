import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from lpbn.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, EXIT_UNSOUND, RunConfig, main, run

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def lp(name):
    return str(DATA / f"{name}.lp")


def call(*argv):
    """Run the CLI in-process; returns (status, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = out, err
    try:
        status = main(list(argv))
    finally:
        sys.stdout, sys.stderr = old
    return status, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", ["ex1", "ex2_p1", "ex2_p2", "ex3"])
def test_json_report_matches_golden(name):
    status, out, _ = call("analyze", lp(name), "--solve", "--format", "json")
    assert status == EXIT_OK
    assert out == (GOLDEN / f"{name}.analyze.json").read_text()


def test_analyze_reports_no_stable_model():
    status, out, _ = call("analyze", lp("ex2_p2"))
    assert status == EXIT_OK
    assert "SingleNegCycle     fired" in out
    assert "stable models: exactly 0" in out


def test_analyze_empty_program():
    status, out, _ = call("analyze", lp("empty"), "--solve")
    assert status == EXIT_OK
    assert "stable models: exactly 1 [1, 1]" in out
    assert "models (fixedpoint-filter): {}" in out


def test_analyze_solve_lists_model():
    _, out, _ = call("analyze", lp("ex1"), "--solve")
    assert out.splitlines()[-1] == "models (fixedpoint-filter): {a}"


def test_solve_outputs():
    assert call("solve", lp("ex3"))[1] == "{b}\n{a,c}\n"
    assert call("solve", lp("ex2_p1"), "--method", "lfp")[1] == "{b}\n{a,c}\n"
    assert call("solve", lp("empty"))[1] == "{}\n"
    status, out, _ = call("solve", lp("ex3"), "--format", "json", "--method", "bruteforce")
    assert json.loads(out) == {"method": "bruteforce", "count": 2, "models": [["b"], ["a", "c"]]}


def test_supported_and_fixpoints():
    assert call("supported", lp("ex1"))[1] == "{a}\n{a,b,c}\n"
    assert call("fixpoints", lp("ex1"))[1] == "100 {a}\n111 {a,b,c}\n"


def test_lfp_prints_program():
    assert call("lfp", lp("ex2_p2"))[1] == "a :- not c.\nb :- not c.\nc :- not c.\n"


def test_export_graphs():
    _, dot, _ = call("export", lp("ex1"), "--graph", "dg")
    arcs = [l for l in dot.splitlines() if "->" in l]
    assert len(arcs) == 4 and sum("dashed" in l for l in arcs) == 1
    assert dot.count(";\n") - len(arcs) == 3  # vertex lines
    _, dot, _ = call("export", lp("ex1"), "--graph", "ig")
    assert "// influence graph, semantic (exact)" in dot
    assert [l.strip() for l in dot.splitlines() if "->" in l] == ['"b" -> "c";', '"c" -> "b";']
    _, dot, _ = call("export", lp("ex1"), "--graph", "ig", "--ig-mode", "syntactic")
    assert "syntactic (over-approximation)" in dot
    assert call("export", lp("empty"))[1] == "digraph dg {\n}\n"


def test_oracle_commands():
    assert call("oracle", lp("ex2_p1"), "stable")[1] == "{b}\n{a,c}\n"
    assert call("oracle", lp("ex1"), "supported")[1] == "{a}\n{a,b,c}\n"
    assert call("oracle", lp("ex3"), "fixpoints")[1] == "010 {b}\n101 {a,c}\n"
    assert call("oracle", lp("ex1"), "cycles")[1] == "+ b c b [++]\n"


def test_parse_error_exit(tmp_path):
    bad = tmp_path / "bad.lp"
    bad.write_text("a :- b")
    status, _, err = call("analyze", str(bad))
    assert status == EXIT_INPUT and "line 1" in err
    assert call("solve", str(tmp_path / "missing.lp"))[0] == EXIT_INPUT


def test_budget_exit_keeps_partial_output(tmp_path):
    f = tmp_path / "loops.lp"
    f.write_text("".join(f"a{i} :- a{i}.\n" for i in range(6)))
    status, out, err = call("supported", str(f), "--fp-budget", "20")
    assert status == EXIT_BUDGET and "budget exhausted" in err
    assert out.count("\n") >= 1


def test_cycle_budget_exit(tmp_path):
    f = tmp_path / "bowtie.lp"
    f.write_text("p1 :- not p0. p2 :- p1. p0 :- p2. p3 :- p0. p4 :- not p3. p0 :- p4.")
    status, out, _ = call("analyze", str(f), "--cycle-budget", "1")
    assert status == EXIT_BUDGET and "unknown" in out


def test_soundness_exit(monkeypatch):
    import lpbn.cli as cli
    from lpbn.errors import SoundnessError

    def broken(*args, **kwargs):
        raise SoundnessError("forced")

    monkeypatch.setattr(cli, "analyze", broken)
    err = io.StringIO()
    assert run(RunConfig("analyze", lp("ex1")), io.StringIO(), err) == EXIT_UNSOUND
    assert "soundness" in err.getvalue()


def test_non_positive_budget_rejected():
    with pytest.raises(SystemExit):
        call("analyze", lp("ex1"), "--cycle-budget", "0")
    with pytest.raises(ValueError):
        RunConfig("analyze", "-", fp_budget=0)


def _subprocess(args, stdin="", env=None):
    return subprocess.run([sys.executable, "-m", "lpbn", *args], input=stdin,
                          capture_output=True, text=True, env=env)


def test_stdin_and_module_entry():
    res = _subprocess(["solve", "-"], stdin=(DATA / "ex3.lp").read_text())
    assert res.returncode == 0 and res.stdout == "{b}\n{a,c}\n"


def test_budget_env_var(tmp_path):
    import os

    f = tmp_path / "loops.lp"
    f.write_text("".join(f"a{i} :- a{i}.\n" for i in range(6)))
    env = {**os.environ, "LPBN_BUDGET": "20"}
    assert _subprocess(["supported", str(f)], env=env).returncode == EXIT_BUDGET
    assert _subprocess(["supported", str(f), "--fp-budget", "1000"], env=env).returncode == EXIT_OK
    env["LPBN_BUDGET"] = "zero"
    assert _subprocess(["supported", str(f)], env=env).returncode != EXIT_OK
