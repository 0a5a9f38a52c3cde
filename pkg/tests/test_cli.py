import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from xop.cli import CliConfig, main, parse_config


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_moments_type_III_check(capsys):
    code, out, _ = run(capsys, "moments", "--family", "lag3", "--alpha", "-0.5", "--count", "10", "--check")
    assert code == 0
    d = json.loads(out)
    assert d["family"] == "lag3" and d["params"] == {"alpha": -0.5}
    vals = [m["value"] for m in d["moments"]]
    assert len(vals) == 10
    assert vals[0] == pytest.approx(2 * math.sqrt(math.pi), rel=1e-13)
    assert vals[2] == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert all(m["error_estimate"] is not None for m in d["moments"])
    assert [m["source"] for m in d["moments"][:3]] == ["initial-closed-form", "initial-closed-form", "recursion"]


def test_moments_jacobi_second_moment(capsys):
    # 128/105 carries the 2^(alpha+beta+1) Beta-integral factor
    code, out, _ = run(capsys, "moments", "--family", "jacobi", "--alpha", "2", "--beta", "4", "--count", "6")
    assert code == 0
    vals = [m["value"] for m in json.loads(out)["moments"]]
    assert vals[2] == pytest.approx(128 / 105, rel=1e-13)


def test_moments_csv(capsys):
    code, out, _ = run(capsys, "moments", "--family", "lag1", "--alpha", "1", "--count", "4", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["k", "value", "source", "error_estimate"]
    assert [r[0] for r in rows[1:]] == ["0", "1", "2", "3"]
    assert float(rows[2][1]) == pytest.approx(0.403652637676805925658921500631, rel=1e-12)
    assert rows[1][3] == ""


def test_poly_type_III(capsys):
    code, out, _ = run(capsys, "poly", "--family", "lag3", "--alpha", "-0.5", "--degree", "2")
    assert code == 0
    d = json.loads(out)
    assert set(d) == {"family", "parameters", "degree", "center", "shifted_coeffs", "monomial_coeffs",
                      "condition_estimate"}
    c = np.asarray(d["monomial_coeffs"])
    assert np.allclose(c / c[-1], [-0.25, 1.0, 1.0], rtol=1e-12)
    assert d["center"] == -0.5 and d["degree"] == 2


def test_poly_type_I_degree_one(capsys):
    code, out, _ = run(capsys, "poly", "--family", "lag1", "--alpha", "1", "--degree", "1", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["i", "shifted_coeff", "monomial_coeff"]
    mono = [float(r[2]) for r in rows[1:]]
    assert mono[0] / mono[1] == pytest.approx(2.0, rel=1e-14)


@pytest.mark.parametrize("argv", [
    ["moments", "--family", "lag3", "--alpha", "0.5"],
    ["poly", "--family", "lag3", "--alpha", "-0.5", "--degree", "1"],
    ["poly", "--family", "lag1", "--alpha", "-1", "--degree", "2"],
    ["moments", "--family", "jacobi", "--alpha", "2"],
    ["moments", "--family", "lag1", "--alpha", "1", "--beta", "2"],
    ["moments", "--family", "lag1", "--alpha", "1", "--count", "1"],
    ["moments", "--family", "lag1", "--alpha", "1", "--tol", "0"],
    ["verify", "--family", "lag1", "--alpha", "1", "--max-degree", "1"],
    ["verify", "--family", "lag3", "--alpha", "-0.5", "--x2-flag"],
])
def test_invalid_parameters_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("error:")


def test_verify_type_III(capsys):
    code, out, _ = run(capsys, "verify", "--family", "lag3", "--alpha", "-0.25", "--max-degree", "6")
    assert code == 0
    d = json.loads(out)
    assert all(c["status"] != "fail" for c in d["checks"])
    names = [c["name"] for c in d["checks"]]
    assert names == sorted(names)


def test_verify_jacobi_has_diagnostic(capsys):
    code, out, _ = run(capsys, "verify", "--family", "jacobi", "--alpha", "2", "--beta", "4", "--max-degree", "6")
    assert code == 0
    checks = json.loads(out)["checks"]
    diag = [c for c in checks if c["name"].startswith("darboux-diagnostic")]
    assert diag and all(c["status"] == "informational" for c in diag)


def test_verify_x2(capsys):
    code, out, _ = run(capsys, "verify", "--family", "lag1", "--alpha", "1.5", "--x2-flag")
    assert code == 0
    x2 = [c for c in json.loads(out)["checks"] if c["name"].startswith("x2/")]
    assert len(x2) == 4 and all(c["status"] == "pass" for c in x2)


def test_verify_csv_and_output_file(capsys, tmp_path):
    target = tmp_path / "report.csv"
    code, out, _ = run(capsys, "verify", "--family", "lag2", "--alpha", "0.5", "--max-degree", "3",
                       "--format", "csv", "-o", str(target))
    assert code == 0 and out == ""
    rows = list(csv.reader(target.open()))
    assert rows[0] == ["name", "paper_anchor", "status", "residual", "tolerance", "note"]


def test_failing_check_exits_1(capsys):
    # --tol loosens the quadrature; the oracle and orthogonality checks then miss their targets
    code, out, _ = run(capsys, "verify", "--family", "lag1", "--alpha", "0.5", "--max-degree", "3", "--tol", "0.9")
    assert code == 1
    failed = {c["name"] for c in json.loads(out)["checks"] if c["status"] == "fail"}
    assert "moments/oracle" in failed


def test_output_is_deterministic(capsys):
    argv = ["verify", "--family", "jacobi", "--alpha", "0.5", "--beta", "1.5", "--max-degree", "4"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second


def test_numbers_have_17_digits(capsys):
    _, out, _ = run(capsys, "poly", "--family", "lag1", "--alpha", "0.5", "--degree", "3")
    d = json.loads(out)
    for v in d["shifted_coeffs"]:
        assert ("%.17g" % v) in out


def test_parse_config():
    cfg = parse_config(["poly", "--family", "jacobi", "--alpha", "2", "--beta", "4", "--degree", "3"])
    assert isinstance(cfg, CliConfig)
    assert (cfg.command, cfg.degree, cfg.fmt, cfg.beta) == ("poly", 3, "json", 4.0)
    assert cfg.descriptor().xi == pytest.approx(3.0)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "xop", "poly", "--family", "lag1", "--alpha", "1", "--degree", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["degree"] == 1
