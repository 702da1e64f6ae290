import json
import subprocess
import sys

import pytest

from padyn.cli import main
from padyn.harness import (
    FAIL,
    PASS,
    SKIPPED_INFEASIBLE,
    CheckRecord,
    Scenario,
    ScenarioError,
    emit,
    parse_map_spec,
    run_scenario,
)

ERGODIC = {"prime": 5, "a": "1", "b": "25", "points": ["5", "125"], "steps": 30,
           "level": 5, "checks": ["all"]}


def statuses(report):
    return {r.name: r.status for r in report.records}


def test_ergodic_scenario_all_pass():
    report = run_scenario(Scenario.from_mapping(ERGODIC))
    assert report.exit_code == 0
    st = statuses(report)
    assert set(st.values()) == {PASS}
    assert {"displacement", "isometry", "non_ergodicity", "invariant_spheres"} <= set(st)
    assert "pole_radii" not in st and report.omitted


def test_construction_error_exit_2():
    report = run_scenario(Scenario.from_mapping({"prime": 5, "a": "1", "b": "2"}))
    assert report.exit_code == 2
    assert "not a square" in report.error
    assert report.to_records()[-1]["exit_code"] == 2


def test_infeasible_point_checks_are_skipped_with_reason():
    s = Scenario.from_mapping({"prime": 5, "alpha": "0", "beta": "0", "delta": "2",
                               "checks": ["crosscheck", "norm_identity", "pole_radii"]})
    report = run_scenario(s)
    st = statuses(report)
    assert st["crosscheck"] == SKIPPED_INFEASIBLE and st["norm_identity"] == SKIPPED_INFEASIBLE
    assert "(x0-x1)+(x0-x2)" in report.records[0].details
    assert st["pole_radii"] == PASS
    assert report.exit_code == 0


def test_all_omits_infeasible_point_checks():
    s = Scenario.from_mapping({"prime": 5, "alpha": "-2", "beta": "0", "delta": "2"})
    report = run_scenario(s)
    names = set(statuses(report))
    assert not names & {"indifference", "norm_identity", "crosscheck"}
    assert any("infeasible" in o for o in report.omitted)


def test_general_map_scenario():
    s = Scenario.from_mapping({"prime": 5, "a": 4, "b": 2, "c": 1, "d": 1, "e": 5,
                               "points": ["2", "1/5", "26"], "steps": 12})
    assert s.family == "general"
    report = run_scenario(s)
    assert report.exit_code == 0, emit(report, "table")


def test_scenario_validation():
    with pytest.raises(ScenarioError):
        Scenario.from_mapping({"a": 1, "b": 25})
    with pytest.raises(ScenarioError):
        Scenario.from_mapping({"prime": 5, "a": 1, "b": 25, "steps": -1})
    with pytest.raises(ScenarioError):
        Scenario.from_mapping({"prime": 5, "a": 1, "b": 25, "checks": ["bogus"]})
    with pytest.raises(ScenarioError):
        Scenario.from_mapping({"prime": 5, "a": 1, "b": 25, "colour": 1})
    with pytest.raises(ScenarioError):
        Scenario.from_json('{"prime": 5, "a": 0.5, "b": 25}')
    with pytest.raises(ScenarioError):
        Scenario.from_mapping({"prime": 5, "a": "x", "b": 25})
    assert parse_map_spec("a=1, b=25,d=1") == {"a": "1", "b": "25", "d": "1"}
    with pytest.raises(ScenarioError):
        parse_map_spec("a=1,b")


def test_failing_record_needs_counterexample():
    with pytest.raises(ValueError):
        CheckRecord("x", FAIL, "broken")


def test_machine_output_is_deterministic():
    s = Scenario.from_mapping(ERGODIC)
    a, b = emit(run_scenario(s), "machine"), emit(run_scenario(s), "machine")
    assert a == b
    lines = [json.loads(x) for x in a.splitlines()]
    assert lines[0]["record"] == "scenario" and lines[-1]["record"] == "summary"
    assert all(list(d) == sorted(d) for d in lines)


def test_emit_formats():
    report = run_scenario(Scenario.from_mapping(ERGODIC))
    table = emit(report, "table")
    assert "non_ergodicity" in table and "pass" in table
    with pytest.raises(ValueError):
        emit(report, "csv")
    with pytest.raises(ValueError):
        emit(report, "yaml")
    rows = [{"n": 0, "value": "5", "distance_exp": "-1"}]
    assert emit(rows, "csv").splitlines() == ["n,value,distance_exp", "0,5,-1"]


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_verbs(capsys, tmp_path):
    code, out, _ = run_cli(["analyze", "--prime", "5", "--map", "a=1,b=25,d=1"], capsys)
    assert code == 0 and "LT_beta" in out and "maps into S_p^0" in out
    code, out, _ = run_cli(["trajectory", "--prime", "5", "--map", "a=1,b=25,d=1",
                            "--point", "5", "--steps", "3", "--format", "csv"], capsys)
    assert code == 0
    assert out.splitlines() == ["start,n,value,distance_exp", "5,0,5,-1", "5,1,30/11,-1",
                                "5,2,1830/851,-1", "5,3,8456430/4602251,-1"]
    code, out, _ = run_cli(["verify", "--prime", "5", "--map", "a=3,b=-1,d=0",
                            "--point", "2", "--point", "1/5", "--format", "machine"], capsys)
    assert code == 0 and '"check": "crosscheck"' in out
    code, out, _ = run_cli(["ergodic", "--prime", "5", "--map", "a=1,b=25", "--point", "5"],
                           capsys)
    assert code == 0 and "isometry" in out
    path = tmp_path / "s.json"
    path.write_text(json.dumps(ERGODIC))
    code, out, _ = run_cli(["report", "--scenario", str(path), "--format", "machine"], capsys)
    assert code == 0 and out.count('"status": "pass"') == 10
    code, _, _ = run_cli(["report", "--scenario", str(path), "--checks", "isometry",
                          "--level", "4"], capsys)
    assert code == 0


def test_cli_input_errors(capsys, tmp_path):
    code, _, err = run_cli(["ergodic", "--prime", "5", "--map", "a=1,b=2"], capsys)
    assert code == 2
    code, _, err = run_cli(["analyze", "--prime", "6", "--map", "a=1,b=25,d=1"], capsys)
    assert code == 2 and "prime" in err
    code, _, err = run_cli(["trajectory", "--prime", "5", "--map", "a=1,b=25,d=1"], capsys)
    assert code == 2
    code, _, err = run_cli(["verify", "--prime", "5", "--map", "a=1,b=25,d=1",
                            "--format", "csv"], capsys)
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"prime": 5, "a": 1.5, "b": 25}')
    code, _, err = run_cli(["report", "--scenario", str(bad)], capsys)
    assert code == 2 and "floating point" in err
    code, _, err = run_cli(["report", "--scenario", str(tmp_path / "missing.json")], capsys)
    assert code == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "padyn.cli", "analyze", "--prime", "5",
                           "--map", "a=3,b=-1,d=0", "--format", "machine"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    head = json.loads(proc.stdout.splitlines()[0])
    assert head["case"] == "EQ_eq" and head["x0"] == "1"
