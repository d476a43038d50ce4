import json

import numpy as np

from curvhom.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_tensors_symmetric_case(capsys):
    code, out, _ = run(capsys, "tensors", "--p", "3", "--theta", "0",
                       "--point", "0,0,0,0,0,0")
    assert code == 0
    dump = json.loads(out)
    assert list(dump) == ["p", "point", "metric", "L", "R", "nablaR"]
    assert not np.array(dump["nablaR"]).any()
    assert dump["R"][0][1][1][0] == 1.0


def test_tensors_sin_theta(capsys):
    code, out, _ = run(capsys, "tensors", "--p", "3",
                       "--theta", "0.5*sin(x1)", "--point", "0,0,0,0,0,0")
    assert code == 0
    dump = json.loads(out)
    assert dump["R"][0][1][1][0] == 1.0
    assert dump["nablaR"][0][1][1][0][0] == -0.5


def test_tensors_field_flag(capsys):
    code, out, _ = run(capsys, "tensors", "--p", "2",
                       "--field", "0.5*(x1^2+x2^2)", "--point", "1,0,0,0")
    assert code == 0
    assert json.loads(out)["L"] == [[1.0, 0.0], [0.0, 1.0]]


def test_missing_p_is_usage_error(capsys):
    code, _, err = run(capsys, "tensors", "--theta", "0")
    assert code == 1
    assert "required" in err or "error" in err


def test_both_field_and_theta_rejected(capsys):
    code, _, err = run(capsys, "tensors", "--p", "3", "--theta", "0",
                       "--field", "x1")
    assert code == 1


def test_neither_field_nor_theta_rejected(capsys):
    code, _, _ = run(capsys, "tensors", "--p", "3")
    assert code == 1


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "tensors", "--p", "3", "--theta", "sin(")
    assert code == 1
    assert "parse error" in err


def test_variable_out_of_range_exit_code(capsys):
    code, _, err = run(capsys, "tensors", "--p", "3", "--field", "x4")
    assert code == 1


def test_domain_violation_exit_code(capsys):
    code, _, err = run(capsys, "tensors", "--p", "1", "--field", "log(x1)",
                       "--point=-1,0")
    assert code == 2


def test_wrong_point_length(capsys):
    code, _, err = run(capsys, "tensors", "--p", "3", "--theta", "0",
                       "--point", "0,0,0")
    assert code == 1
    assert "6" in err


def test_alpha_scan_csv_and_summary(capsys, tmp_path):
    out_path = tmp_path / "scan.csv"
    code, out, _ = run(capsys, "alpha-scan", "--p", "3",
                       "--theta", "0.5*sin(x1)", "--grid=-1:1:21",
                       "--out", str(out_path))
    assert code == 0
    summary = json.loads(out)
    assert summary["verdict"].startswith("NOT locally homogeneous")
    lines = out_path.read_text().splitlines()
    assert lines[0] == "x1,x2,x3,alpha"
    assert len(lines) == 22


def test_alpha_scan_inconclusive(capsys):
    code, out, _ = run(capsys, "alpha-scan", "--p", "3", "--theta", "0",
                       "--grid=-1:1:21", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["verdict"].startswith("inconclusive")
    assert doc["summary"]["min"] == 0.0


def test_alpha_scan_reports_skipped_points(capsys):
    code, out, _ = run(capsys, "alpha-scan", "--p", "3",
                       "--theta", "2*sin(x1)", "--grid=-1.5:1.5:11",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["skipped"] > 0
    assert doc["summary"]["skipped_points"][0]["reason"]


def test_byte_identical_outputs(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code, _, _ = run(capsys, "spectral", "--p", "3",
                         "--theta", "0.5*sin(x1)", "--kind",
                         "jacobi-spacelike", "--n", "10", "--seed", "5",
                         "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_spectral_report(capsys):
    code, out, _ = run(capsys, "spectral", "--p", "3",
                       "--theta", "0.5*sin(x1)", "--kind", "szabo-timelike",
                       "--n", "15", "--point", "0.3,0,0,0,0,0")
    assert code == 0
    doc = json.loads(out)
    assert doc["num_distinct_fingerprints"] == 1
    assert doc["seed"] == 1729  # documented default


def test_spectral_higher_jacobi_needs_rs(capsys):
    code, _, err = run(capsys, "spectral", "--p", "3", "--theta", "0",
                       "--kind", "higher-jacobi", "--n", "5")
    assert code == 1
    code, out, _ = run(capsys, "spectral", "--p", "3", "--theta", "0",
                       "--kind", "higher-jacobi", "--n", "5", "--rs", "1,1")
    assert code == 0
    assert json.loads(out)["kind"] == "higher-jacobi(1,1)"


def test_spectral_hypothesis_violation(capsys):
    code, _, err = run(capsys, "spectral", "--p", "3",
                       "--field", "0.5*(x1^2-x2^2+x3^2)",
                       "--kind", "jacobi-spacelike", "--n", "5")
    assert code == 2


def test_seed_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("CURVHOM_SEED", "99")
    code, out, _ = run(capsys, "spectral", "--p", "3", "--theta", "0",
                       "--kind", "jacobi-spacelike", "--n", "5")
    assert code == 0
    assert json.loads(out)["seed"] == 99
    monkeypatch.setenv("CURVHOM_SEED", "not-a-number")
    code, _, _ = run(capsys, "spectral", "--p", "3", "--theta", "0",
                     "--kind", "jacobi-spacelike", "--n", "5")
    assert code == 1


def test_model_dump(capsys):
    code, out, _ = run(capsys, "model", "--p", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["r"] == 4
    assert np.array(doc["metric"]).shape == (4, 4)


def test_verify_default_passes(capsys):
    code, out, _ = run(capsys, "verify", "--p", "3", "--seed", "1729")
    assert code == 0
    report = json.loads(out)
    assert report["passed"]
    names = [c["name"] for c in report["checks"]]
    assert "dual-route-curvature" in names
    assert "alpha-closed-form" in names


def test_verify_injected_tolerance_fails(capsys):
    code, out, _ = run(capsys, "verify", "--p", "3", "--tol", "1e-15")
    assert code == 2
    report = json.loads(out)
    assert not report["passed"]
    failing = [c for c in report["checks"] if not c["passed"]]
    assert failing
    assert all("residual" in c for c in failing)


def test_verify_p2_skips_recovery(capsys):
    code, out, _ = run(capsys, "verify", "--p", "2")
    assert code == 0
    report = json.loads(out)
    entry = next(c for c in report["checks"]
                 if c["name"] == "form-recovery-round-trip")
    assert entry.get("skipped")
    assert "dimension" in entry["note"]
