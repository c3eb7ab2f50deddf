import csv
import json
import subprocess
import sys

import pytest

from bcovring.cli import EXIT_FAIL, EXIT_LOAD, EXIT_OK, EXIT_USAGE, Check, RunReport, frac_str, run


def call(*argv):
    code, text = run(list(argv))
    return code, (json.loads(text) if code in (EXIT_OK, EXIT_FAIL) and text else text)


def test_pf_elliptic():
    code, rep = call("pf", "--model", "elliptic", "--order", "20")
    assert code == EXIT_OK and rep["all_pass"]
    assert rep["payload"]["omega0"]["coefficients"][:4] == ["1", "60", "13860", "4084080"]
    assert len(rep["payload"]["omega0"]["coefficients"]) == 21
    assert rep["payload"]["x_of_q"]["coefficients"][:2] == ["1", "-312"]


def test_pf_order_zero():
    code, rep = call("pf", "--model", "elliptic", "--order", "0")
    assert code == EXIT_OK
    assert rep["payload"]["omega0"]["coefficients"] == ["1"]


def test_pf_rationals_are_strings():
    code, rep = call("pf", "--model", "quintic", "--order", "3")
    assert code == EXIT_OK
    coeffs = rep["payload"]["omega1_regular"]["coefficients"]
    assert all(isinstance(c, str) for c in coeffs)
    assert "3745679000/3" in coeffs


def test_bad_model_path(tmp_path):
    code, msg = call("pf", "--model", str(tmp_path / "missing.yaml"))
    assert code == EXIT_LOAD and "not found" in msg
    bad = tmp_path / "bad.yaml"
    bad.write_text("kind: threefold\nyukawa: '1/x^3'\n")
    code, msg = call("pf", "--model", str(bad))
    assert code == EXIT_LOAD and "schema" in msg


@pytest.mark.parametrize("suite,order", [("elliptic-identities", 20), ("lambda-lifts", 20), ("quintic-ring", 10), ("modular", 20), ("cusp-data", 0)])
def test_verify_suites_pass(suite, order):
    code, rep = call("verify", "--suite", suite, "--order", str(order))
    assert code == EXIT_OK, [c for c in rep["checks"] if not c["pass"]]
    assert rep["checks"] and all(c["pass"] and c["first_failure"] is None for c in rep["checks"])


def test_verify_elliptic_names_identity():
    _, rep = call("verify", "--suite", "elliptic-identities", "--order", "20")
    assert "omega0(x(q))^4 = E4(q)" in [c["name"] for c in rep["checks"]]


def test_verify_low_order_warns():
    code, rep = call("verify", "--suite", "elliptic-identities", "--order", "1")
    assert code == EXIT_OK and rep["warnings"]


def test_verify_unknown_suite():
    code, _ = call("verify", "--suite", "nope")
    assert code == EXIT_USAGE


def test_solve_genus_two():
    code, rep = call("solve", "--model", "quintic", "--genus", "2")
    assert code == EXIT_OK
    g2 = rep["payload"]["genera"]["2"]
    assert g2["weight"] == -2
    assert g2["terms"] == {"hS": "700/9", "Sxx*hSx*Cxxx": "-25/6", "Sxx^3*Cxxx^2": "5/24"}


def test_solve_usage_errors():
    assert call("solve", "--model", "quintic", "--genus", "1")[0] == EXIT_USAGE
    assert call("solve", "--model", "quintic", "--genus", "2", "--variant", "other")[0] == EXIT_USAGE
    assert call("solve", "--model", "elliptic", "--genus", "2")[0] == EXIT_USAGE


def test_solve_holomorphic_and_csv(tmp_path):
    out, table = tmp_path / "r.json", tmp_path / "t.csv"
    code, text = run(["solve", "--model", "quintic", "--genus", "2", "--variant", "lifted", "--emit-holomorphic", "--order", "5", "--out", str(out), "--csv", str(table)])
    assert code == EXIT_OK and text == ""
    rep = json.loads(out.read_text())
    series = rep["payload"]["genera"]["2"]["holomorphic_q"]
    assert series["var"] == "q" and series["prec"] >= 6
    rows = list(csv.reader(table.open()))
    assert rows[0] == ["series", "variable", "exponent", "coefficient"]
    assert rows[1][0] == "genera.2.holomorphic_q"


def test_output_is_byte_deterministic():
    a = run(["solve", "--model", "quintic", "--genus", "3"])[1]
    b = run(["solve", "--model", "quintic", "--genus", "3"])[1]
    assert a == b
    assert "wall_time_s" not in a


def test_exit_code_reflects_checks():
    rep = RunReport("x", "m", {}, [Check("a", True), Check("b", False, "x^3")])
    assert not rep.ok
    assert rep.to_json()["checks"][1]["first_failure"] == "x^3"
    assert frac_str(0.5) == "1/2" and frac_str(3) == "3"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bcovring.cli", "pf", "--model", "elliptic", "--order", "2", "--timing"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "wall_time_s" in json.loads(proc.stdout)
