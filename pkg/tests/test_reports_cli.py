import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from qrframes.cli import main
from qrframes.errors import DomainError, ValidationError
from qrframes.reports import RunReport, emit_report
from qrframes.scenarios import load_scenario, run_scenario

ROOT = Path(__file__).resolve().parents[1]
SCEN = ROOT / "scenarios"


def doc(kind, **params):
    return {"kind": kind, "schema_version": 1, "parameters": params}


def two_body(**kw):
    p = {"n": 16, "a": 3, "alpha": [0.7071067811865476, 0], "beta": [0.7071067811865476, 0]}
    p.update(kw)
    return doc("translation_two_body", **p)


def test_two_body_report():
    rep = run_scenario(two_body())
    assert rep.passed
    assert rep.check("psi_M_reproduction").status == "pass"


def test_identical_fields_give_identity_map():
    vals = [[i, 0, 0, 0] for i in range(3)]
    g = {"points": 3, "fields": {"chi": vals}}
    sup = {"branches": [{"amplitude": [0.7071067811865476, 0], "geometry": g}] * 2}
    rep = run_scenario(doc("spacetime_superposition", superposition=sup, frame_field="chi"))
    assert rep.check("comparison_map").measured["identity"] is True


def test_example_scenarios_pass():
    for path in sorted(SCEN.glob("*.json")):
        assert run_scenario(load_scenario(path)).passed, path.name


@pytest.mark.parametrize("bad", [
    {"kind": "nope", "schema_version": 1, "parameters": {}},
    {"kind": "translation_two_body", "schema_version": 2, "parameters": {}},
    two_body(n="16"),
    two_body(extra=1),
    two_body(a=8),
    two_body(alpha=[0, 0], beta=[0, 0]),
])
def test_invalid_scenarios(bad):
    with pytest.raises(ValidationError):
        run_scenario(bad)


def test_json_report_of_passing_run():
    d = json.loads(emit_report(run_scenario(two_body())))
    assert d["status"] == "pass"
    assert all(c["status"] == "pass" for c in d["checks"])
    assert "timings" not in d


def test_csv_outputs():
    empty = RunReport("empty")
    assert emit_report(empty, "csv") == "check,status,quantity,value,tolerance\n"
    rep = run_scenario(load_scenario(SCEN / "curvature.json"))
    rows = list(csv.DictReader(io.StringIO(emit_report(rep, "csv", table="localisation"))))
    assert [r["localised_R"] for r in rows] == ["true"] * 4
    assert [r["localised_Rt"] for r in rows] == ["false", "false", "true", "true"]
    with pytest.raises(DomainError):
        emit_report(rep, "xml")
    with pytest.raises(DomainError):
        emit_report(rep, "csv", table="missing")


def test_duplicate_check_rejected():
    r = RunReport("x")
    r.add("a", True)
    with pytest.raises(Exception):
        r.add("a", True)


def test_report_roundtrip():
    rep = run_scenario(two_body())
    again = RunReport.from_dict(json.loads(emit_report(rep)))
    assert emit_report(again) == emit_report(rep)


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["run", str(SCEN / "two_body.json"), "--out", str(tmp_path / "r.json")]) == 0
    assert json.loads((tmp_path / "r.json").read_text())["status"] == "pass"

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(two_body(a=0)))
    capsys.readouterr()
    assert main(["run", str(bad)]) == 2
    err = json.loads(capsys.readouterr().out)
    assert err["error"] == "validation"

    bad.write_text("{not json")
    assert main(["run", str(bad)]) == 2
    assert main(["verify", "--cases", "0"]) == 2


def test_cli_check_failure_exit_code(tmp_path, capsys):
    rep = RunReport("x")
    rep.add("broken", False)
    path = tmp_path / "failed.json"
    path.write_text(emit_report(rep))
    assert main(["report", "--input", str(path), "--format", "csv", "--out", str(tmp_path / "f.csv")]) == 1
    assert "broken,fail" in (tmp_path / "f.csv").read_text()


def test_cli_env_overrides(tmp_path, monkeypatch):
    monkeypatch.setenv("QRFRAMES_SEED", "9")
    monkeypatch.setenv("QRFRAMES_OUT_DIR", str(tmp_path))
    assert main(["verify", "--cases", "3"]) == 0
    d = json.loads((tmp_path / "property_suite.json").read_text())
    assert d["seed"] == 9


def test_cli_internal_error(monkeypatch, capsys):
    import qrframes.cli as cli

    def boom(_):
        raise RuntimeError("kaput")

    monkeypatch.setattr(cli, "run_scenario", boom)
    assert main(["run", str(SCEN / "two_body.json")]) == 3
    assert json.loads(capsys.readouterr().out)["error"] == "internal"


def test_module_entry_point(tmp_path):
    out = tmp_path / "v.json"
    proc = subprocess.run([sys.executable, "-m", "qrframes", "verify", "--seed", "1", "--cases", "2", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["status"] == "pass"
