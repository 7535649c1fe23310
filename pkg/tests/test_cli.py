import hashlib
import json
import shutil
import subprocess

import jsonschema
import pytest

from relkit.cli import canonical_json, load_schema, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(argv, capsys):
    code, out, _ = run(argv, capsys)
    return code, json.loads(out)


def write_manifest(tmp_path, obj, name="m.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_roots_inspect_single_case(capsys):
    code, report = run_json(["roots", "inspect", "--case", "G2"], capsys)
    assert code == 0
    rec = report["records"][0]
    assert rec["roots"] == 12 and rec["height"] == 5
    jsonschema.validate(report, load_schema("report"))


def test_relroots_pass_and_fail_exit_codes(capsys):
    assert run(["relroots", "verify", "--case", "A3", "--J", "1,3"], capsys)[0] == 0
    # a counterexample recorded in the campaign failures
    code, report = run_json(["relroots", "verify", "--case", "F4", "--J", "2,4"], capsys)
    assert code == 1 and report["rollup"]["fail"] == 1
    assert report["records"][0]["failures"]


def test_empty_manifest_passes(tmp_path, capsys):
    path = write_manifest(tmp_path, {"cases": []})
    code, report = run_json(["roots", "inspect", "--manifest", path], capsys)
    assert code == 0 and report["rollup"]["total"] == 0


def test_mismatched_cartan_is_invalid(tmp_path, capsys):
    path = write_manifest(tmp_path, {"cases": [{"series": "A", "rank": 2, "cartan": [[2, -1], [-2, 2]]}]})
    code, _, err = run(["roots", "inspect", "--manifest", path], capsys)
    assert code == 2 and "Cartan" in err


def test_schema_violation_is_invalid(tmp_path, capsys):
    path = write_manifest(tmp_path, {"cases": [{"series": "H", "rank": 3}]})
    assert run(["roots", "inspect", "--manifest", path], capsys)[0] == 2
    path = write_manifest(tmp_path, {"cases": [], "colour": "blue"}, "extra.json")
    assert run(["roots", "inspect", "--manifest", path], capsys)[0] == 2


def test_unreadable_manifest_is_invalid(tmp_path, capsys):
    (tmp_path / "bad.json").write_text("{not json")
    assert run(["roots", "inspect", "--manifest", str(tmp_path / "bad.json")], capsys)[0] == 2


def test_unsupported_system_and_bad_J_are_invalid(capsys):
    assert run(["roots", "inspect", "--case", "E9"], capsys)[0] == 2
    assert run(["relroots", "verify", "--case", "A2", "--J", "1,5"], capsys)[0] == 2


def test_gated_ring_is_invalid(capsys):
    code, _, err = run(["steinberg", "enumerate", "--case", "C2", "--ring", "Z/4"], capsys)
    assert code == 2 and "not invertible" in err


def test_missing_ring_is_invalid(capsys):
    assert run(["lab", "diameter", "--case", "A2"], capsys)[0] == 2


def test_overflow_exit_code_depends_on_strict(capsys):
    argv = ["steinberg", "enumerate", "--case", "A2", "--ring", "F3", "--budget", "100"]
    code, report = run_json(argv, capsys)
    assert code == 0 and report["records"][0]["status"] == "overflow"
    assert run(argv + ["--strict"], capsys)[0] == 3


def test_steinberg_report_and_presentation_dir(tmp_path, capsys):
    code, report = run_json(["steinberg", "enumerate", "--case", "A2", "--ring", "F2",
                             "--presentation-dir", str(tmp_path)], capsys)
    assert code == 0
    rec = report["records"][0]
    assert rec["St"] == rec["E"] == 168 and rec["central"]
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and files[0].read_text().count("\ngen ") == 6


def test_out_dir_naming_and_summarize(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("RELKIT_OUT_DIR", str(tmp_path))
    code, out, _ = run(["lab", "diameter", "--case", "A2", "--ring", "F2"], capsys)
    assert code == 0
    files = list(tmp_path.glob("lab-diameter-*.json"))
    assert len(files) == 1
    report = json.loads(files[0].read_text())
    assert files[0].name == f"lab-diameter-{report['manifest_hash'][:12]}.json"
    assert report["rollup"]["measured"] == 1
    code, out, _ = run(["report", "summarize", str(files[0])], capsys)
    assert code == 0 and json.loads(out)["rollup"]["status"] == "pass"


def test_out_flag_and_manifest_hash(tmp_path, capsys):
    target = tmp_path / "r.json"
    assert run(["roots", "inspect", "--case", "B3", "--out", str(target)], capsys)[0] == 0
    report = json.loads(target.read_text())
    assert report["manifest_hash"] == hashlib.sha256(canonical_json(report["manifest"]).encode()).hexdigest()


def test_summarize_rejects_invalid_report(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"tool": "relkit"}))
    assert run(["report", "summarize", str(bad)], capsys)[0] == 2


def test_pretty_table(capsys):
    code, out, _ = run(["roots", "inspect", "--case", "A2", "--pretty"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split()[:2] == ["case", "status"]
    assert "1 cases, 1 pass" in lines[-1]


def test_constants_single_case_includes_table(capsys):
    code, report = run_json(["constants", "compute", "--case", "G2"], capsys)
    rec = report["records"][0]
    assert code == 0 and rec["mode"] == "symbolic" and "constants" in rec


def test_reports_are_deterministic_up_to_timing(capsys):
    argv = ["lab", "normality", "--case", "A2", "--ring", "Z/4", "--seeds", "3"]
    reports = [run_json(argv, capsys)[1] for _ in range(2)]
    for r in reports:
        r.pop("timing")
    assert canonical_json(reports[0]) == canonical_json(reports[1])


def test_console_script():
    exe = shutil.which("relkit")
    if exe is None:
        pytest.skip("console script not installed")
    proc = subprocess.run([exe, "roots", "inspect", "--case", "A1"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["rollup"]["pass"] == 1
