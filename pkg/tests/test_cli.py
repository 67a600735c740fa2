import csv
import io
import json
import math
import subprocess
import sys

import pytest

from ecstates.cli import fmt, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_fmt():
    assert fmt(0.1 + 0.2) == "0.3"
    assert fmt(-0.0) == "0"
    assert fmt(True) == "true"
    assert fmt(3) == "3"
    assert fmt(math.pi) == "3.14159265358979"


def test_density_first_order_node(capsys):
    code, out = run(capsys, "density", "--m", "1", "--beta", "1",
                    "--eps-min", f"{-math.sqrt(2) / 2}", "--eps-max", f"{math.sqrt(2) / 2}",
                    "--eps-points", "3")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["m", "beta", "alpha", "t", "eps", "density", "re_psi", "im_psi", "density_m1"]
    node = table[2]  # eps = eps0 / 2
    assert float(node["density"]) == pytest.approx(0, abs=1e-15)
    assert float(node["density_m1"]) == pytest.approx(0, abs=1e-15)


def test_density_coherent_peak(capsys):
    code, out = run(capsys, "density", "--m", "0", "--alpha", "0", "--eps-min", "-1",
                    "--eps-max", "1", "--eps-points", "3", "--t-steps", "3")
    table = rows(out)
    assert "density_m1" not in table[0]
    peaks = [r for r in table if r["eps"] == "0"]
    assert len(peaks) == 3
    for r in peaks:
        assert float(r["density"]) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-14)


def test_width_columns(capsys):
    code, out = run(capsys, "width", "--m", "1", "--beta", "4", "--t-steps", "9")
    table = rows(out)
    assert code == 0 and len(table) == 9
    assert list(table[0]) == ["m", "beta", "alpha", "t", "delta_x", "ratio_x", "delta_p", "product", "mean_x"]
    assert min(float(r["ratio_x"]) for r in table) == pytest.approx(0.8718, abs=1e-4)
    assert table[0]["alpha"] == "2"


def test_width_no_squeezing_below_threshold(capsys):
    _, out = run(capsys, "width", "--m", "1", "--beta", "0.5", "--t-steps", "33")
    assert all(float(r["ratio_x"]) >= 1 for r in rows(out))


def test_width_coherent_constant(capsys):
    _, out = run(capsys, "width", "--m", "0", "--beta", "3", "--t-steps", "17")
    assert len({r["delta_x"] for r in rows(out)}) == 1


def test_squeeze_scan(capsys):
    _, out = run(capsys, "squeeze-scan", "--m", "1", "--beta", "0.5", "1.0", "2.0", "3.0")
    table = rows(out)
    assert [r["squeezed"] for r in table] == ["false", "false", "true", "true"]
    assert float(table[1]["min_ratio"]) == pytest.approx(1.0, abs=1e-9)
    assert float(table[3]["min_ratio"]) == pytest.approx(math.sqrt(3) / 2, rel=1e-12)


def test_squeeze_scan_coherent(capsys):
    _, out = run(capsys, "squeeze-scan", "--m", "0", "--beta", "0.1", "1", "5", "20")
    assert all(r["squeezed"] == "false" for r in rows(out))


def test_squeeze_scan_needs_two_values(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["squeeze-scan", "--m", "1", "--beta", "2"])
    assert exc.value.code == 2
    assert "--beta" in capsys.readouterr().err


@pytest.mark.parametrize("argv,flag", [
    (["width", "--m", "1"], "--beta"),
    (["width", "--beta", "1", "--alpha", "1"], "--alpha"),
    (["density", "--beta", "1", "--eps-points", "1"], "--eps-points"),
    (["width", "--beta", "1", "--omega", "0"], "--omega"),
    (["density", "--beta", "1", "--eps-min", "2", "--eps-max", "1"], "--eps-min"),
    (["width", "--beta", "1", "2"], "--beta"),
])
def test_usage_errors(capsys, argv, flag):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    assert flag in capsys.readouterr().err


def test_deterministic_csv(capsys, tmp_path):
    argv = ["density", "--m", "2", "--beta", "1.7", "--phi", "0.3", "--t-steps", "4", "--eps-points", "31"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    data = a.read_bytes()
    assert b"\r" not in data and data.endswith(b"\n")


def test_json_output(capsys):
    _, out = run(capsys, "width", "--m", "1", "--alpha", "2", "--t-steps", "3", "--format", "json")
    doc = json.loads(out)
    assert doc["params"]["beta"] == 4.0 and doc["params"]["alpha"] == 2.0
    assert len(doc["rows"]) == 3
    assert doc["rows"][0]["ratio_x"] == pytest.approx(math.sqrt(19) / 5, rel=1e-14)


def test_verify_default_passes(capsys):
    code, out = run(capsys, "verify")
    report = json.loads(out)
    assert code == 0
    assert report["overall"] is True
    for c in report["checks"]:
        assert set(c) >= {"check_name", "residual", "tolerance", "pass"}
        assert c["pass"] is True


def test_verify_undersized_truncation(capsys):
    code, out = run(capsys, "verify", "--trunc-dim", "5", "--beta", "9")
    report = json.loads(out)
    assert code == 1 and report["overall"] is False
    failed = {c["check_name"]: c for c in report["checks"] if not c["pass"]}
    assert "TruncationError" in failed["ecs_norm_identity"]["detail"]
    assert "three_way_moments" in failed


def test_verify_paper_literal(capsys):
    code, out = run(capsys, "verify", "--paper-literal-constants", "--m", "1")
    report = json.loads(out)
    assert code == 1
    by_name = {c["check_name"]: c for c in report["checks"]}
    assert by_name["constants_first_order"]["pass"] is False
    assert by_name["constants_first_order"]["residual"] == pytest.approx(9**2 / 10, rel=1e-12)
    for beta, entry in report["erratum_first_order_C2"].items():
        b = float(beta)
        assert entry["residual"] == pytest.approx(b * b / (1 + b), rel=1e-12)


def test_verify_csv(capsys):
    code, out = run(capsys, "verify", "--format", "csv")
    table = rows(out)
    assert code == 0 and list(table[0]) == ["check_name", "residual", "tolerance", "pass"]


def test_figures(tmp_path, capsys):
    assert main(["figures", "--out", str(tmp_path)]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["fig1_density.csv", "fig2_width.csv", "fig3_width.csv"]
    fig3 = rows((tmp_path / "fig3_width.csv").read_text())
    assert all(float(r["ratio_x"]) >= 1 - 1e-12 for r in fig3)


def test_help_documents_columns():
    out = subprocess.run([sys.executable, "-m", "ecstates", "width", "--help"],
                         capture_output=True, text=True, check=True).stdout
    assert "ratio_x" in out and "--paper-literal-constants" in out


def test_module_exit_codes():
    bad = subprocess.run([sys.executable, "-m", "ecstates", "width"], capture_output=True, text=True)
    assert bad.returncode == 2
    fail = subprocess.run([sys.executable, "-m", "ecstates", "verify", "--trunc-dim", "5", "--beta", "9"],
                          capture_output=True, text=True)
    assert fail.returncode == 1
