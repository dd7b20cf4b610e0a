import json
import subprocess
import sys

import pytest

from cpdsurf.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_list_text_and_json(capsys, tmp_path):
    code, out, _ = run(capsys, "list")
    assert code == 0 and "spacelike_maximal" in out and "maximal-c1" in out
    code, out, _ = run(capsys, "list", "--json")
    entries = json.loads(out)
    assert isinstance(entries, list) and len(entries) == 10
    assert {"family_id", "theorem", "parameters", "domain", "presets"} <= set(entries[0])
    code, out, _ = run(capsys, "list", "--family", "bscroll", "--json")
    (entry,) = json.loads(out)
    assert entry["family_id"] == "bscroll" and "s > 1/2" in entry["domain"]
    path = tmp_path / "families.json"
    assert run(capsys, "list", "--json", str(path))[0] == 0
    assert len(json.loads(path.read_text())) == 10


def test_verify_preset_passes(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--preset", "maximal-c1", "--json", str(path))
    assert code == 0 and "PASS" in out
    report = json.loads(path.read_text())
    assert report["passed"] is True
    assert report["measures"]["max_residual"] <= 1e-8
    assert report["config"]["tolerances"]["residual"] == 1e-8


def test_verify_counterexample_fails(capsys):
    code, out, _ = run(capsys, "verify", "--family", "graph-counterexample")
    assert code == 1 and "FAIL" in out


def test_verify_bscroll_case_check(capsys, tmp_path):
    path = tmp_path / "b.json"
    code, _, _ = run(capsys, "verify", "--preset", "bscroll", "--check", "case", "--json", str(path))
    report = json.loads(path.read_text())
    assert code == 0
    assert report["measures"]["grid"]["case_histogram"] == {"CaseII_Null": 441}
    assert [c["check"] for c in report["checks"]] == ["case"]


def test_verify_family_with_params_and_tolerance(capsys):
    code, _, _ = run(capsys, "verify", "--family", "lightlike_general", "--param", "phi=s+3",
                     "--param", "eps=1", "--grid", "7x5", "--domain", "0,1,-1,1")
    assert code == 0
    # an absurdly tight tolerance turns the same run into a failure
    code, _, _ = run(capsys, "verify", "--family", "lightlike_general", "--param", "phi=s+3",
                     "--grid", "7x5", "--tol", "residual=1e-30", "--check", "residual")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["verify"],
    ["verify", "--preset", "nope"],
    ["verify", "--family", "torus"],
    ["verify", "--preset", "bscroll", "--family", "bscroll"],
    ["verify", "--preset", "bscroll", "--grid", "1x5"],
    ["verify", "--preset", "bscroll", "--grid", "abc"],
    ["verify", "--preset", "bscroll", "--domain", "1,0,0,1"],
    ["verify", "--preset", "bscroll", "--domain", "0.4,2,-1,1"],
    ["verify", "--preset", "bscroll", "--tol", "residual=-1"],
    ["verify", "--preset", "bscroll", "--tol", "bogus=1"],
    ["verify", "--preset", "bscroll", "--check", "bogus"],
    ["verify", "--family", "spacelike_maximal", "--param", "c=0"],
    ["verify", "--family", "spacelike_maximal", "--param", "q=1"],
    ["verify", "--family", "spacelike_general", "--param", "theta=import os"],
    ["export", "--preset", "bscroll", "--format", "stl"],
    ["suite", "--only", "nothing-like-this"],
    ["frobnicate"],
    [],
])
def test_config_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"preset": "lorentzian-minimal-1", "grid": "5x5",
                               "check": ["residual", "extremal"], "tol": {"extremal": 1e-9}}))
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "--config", str(cfg), "--json", str(out))
    report = json.loads(out.read_text())
    assert code == 0 and report["config"]["grid"] == [5, 5]
    assert report["config"]["tolerances"]["extremal"] == 1e-9
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "verify", "--config", str(bad))[0] == 2
    bad.write_text(json.dumps({"colour": "red"}))
    assert run(capsys, "verify", "--config", str(bad))[0] == 2


def test_export_obj(capsys, tmp_path):
    path = tmp_path / "m.obj"
    code, _, _ = run(capsys, "export", "--preset", "maximal-c1", "--format", "obj",
                     "--grid", "21x21", "-o", str(path))
    text = path.read_text()
    lines = text.splitlines()
    assert code == 0
    assert lines[0].startswith("#") and "spacelike_maximal" in lines[0]
    assert sum(1 for ln in lines if ln.startswith("v ")) == 441
    faces = [ln for ln in lines if ln.startswith("f ")]
    assert len(faces) == 400
    idx = [int(i) for f in faces for i in f.split()[1:]]
    assert min(idx) == 1 and max(idx) == 441


def test_export_csv(capsys, tmp_path):
    path = tmp_path / "m.csv"
    code, _, _ = run(capsys, "export", "--preset", "maximal-c1", "--format", "csv",
                     "--domain", "0.4,0.6,-0.1,0.1", "--grid", "3x3", "-o", str(path))
    raw = path.read_bytes()
    assert code == 0 and b"\r" not in raw
    rows = raw.decode().splitlines()
    assert rows[0] == "s,t,x1,x2,x3,H,K,residual"
    assert len(rows) == 10
    row = dict(zip(rows[0].split(","), map(float, rows[5].split(","))))
    assert (row["s"], row["t"]) == (0.5, 0.0)
    assert (row["x1"], row["x2"], row["x3"]) == pytest.approx((0.5235988, 0, 0.8660254), abs=1e-7)
    assert abs(row["H"]) <= 1e-8 and row["residual"] <= 1e-8


def test_suite_only_and_json(capsys, tmp_path):
    path = tmp_path / "s.json"
    code, out, _ = run(capsys, "suite", "--only", "lightlike_general", "--json", str(path),
                       "--no-determinism")
    report = json.loads(path.read_text())
    assert code == 0
    assert list(report["presets"]) == ["lightlike-general"]
    assert report["config"]["tolerances"]["oracle2"] == 1e-5
    assert "criterion  1 PASS" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cpdsurf.cli", "list", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)
