import csv
import io
import json
import subprocess
import sys

import pytest

from kdvheat.cli import main
from kdvheat.tolerances import TOLERANCES, tolerance


@pytest.fixture
def taus(tmp_path):
    files = {
        "free": {"type": "soliton", "wavenumbers": [], "phase_constants": []},
        "soliton1": {"type": "soliton", "wavenumbers": ["1"], "phase_constants": ["0"]},
        "rational1": {"type": "rational", "level": 1},
        "bad": {"type": "theta", "genus": 2},
    }
    out = {}
    for name, body in files.items():
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(body))
        out[name] = str(path)
    (tmp_path / "broken.json").write_text("{not json")
    out["broken"] = str(tmp_path / "broken.json")
    return out


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_hadamard_free_is_zero(taus):
    code, text = run("hadamard", "--tau", taus["free"], "--n", "3", "--x", "1", "--y", "0")
    assert code == 0
    rec = json.loads(text)
    assert float(rec["value"]) == 0
    assert "meta" in rec and "timestamp" in rec["meta"]


def test_hadamard_rational_value(taus):
    code, text = run("hadamard", "--tau", taus["rational1"], "--n", "1", "--x", "1", "--y", "2", "--no-timestamp")
    assert code == 0
    assert abs(float(json.loads(text)["value"]) + 1) < 1e-15


def test_hadamard_diag_flag(taus):
    code, text = run("hadamard", "--tau", taus["rational1"], "--n", "1", "--x", "2", "--diag", "--no-timestamp")
    assert code == 0 and abs(float(json.loads(text)["value"]) + 0.5) < 1e-15


def test_gegenbauer_example():
    code, text = run("gegenbauer", "--n", "1", "--lambda", "1/2", "--no-timestamp")
    assert code == 0
    assert json.loads(text)["coefficients"] == ["0", "1"]


def test_negative_lambda_accepted():
    for argv in (["--lambda", "-3/2"], ["--lambda=-3/2"], ["--lambda", "-1.5"]):
        code, text = run("gegenbauer", "--n", "2", *argv, "--no-timestamp")
        assert code == 0
        assert json.loads(text)["coefficients"] == ["3/2", "0", "3/2"]


def test_pnj_schur_lax():
    code, text = run("pnj", "--n", "1", "--j", "0", "--no-timestamp")
    assert json.loads(text)["coefficients"] == ["1"]
    code, text = run("schur", "3", "--no-timestamp")
    assert json.loads(text)["polynomial"] == "s3 + (1/6)*x^3"
    code, text = run("lax", "--j", "3", "--no-timestamp")
    rec = json.loads(text)
    assert {(t["monomial"], t["coeff"]) for t in rec["terms"]} == {("u'''", "1/4"), ("u*u'", "3/2")}


def test_wcoeff(taus):
    code, text = run("wcoeff", "--tau", taus["rational1"], "--n", "1", "--x", "1", "--y", "2", "--no-timestamp")
    # W_1 = 1/y - 1/x for tau = x
    assert code == 0 and abs(float(json.loads(text)["value"]) + 0.5) < 1e-15


def test_verify_all_passes(taus):
    code, text = run("verify", "--tau", taus["soliton1"], "--suite", "all", "--nmax", "4", "--no-timestamp")
    assert code == 0
    rec = json.loads(text)
    assert all(s["passed"] for s in rec["suites"].values())
    assert {"recursion", "kdv", "flows", "bilinear", "smoothness"} <= set(rec["suites"])


def test_verify_fails_with_impossible_tolerance(taus):
    code, text = run("verify", "--tau", taus["soliton1"], "--suite", "recursion", "--nmax", "3",
                     "--tol", "recursion=1e-300", "--no-timestamp")
    assert code == 1
    assert json.loads(text)["suites"]["recursion"]["passed"] is False


@pytest.mark.parametrize("name", ["bad", "broken"])
def test_input_errors_exit_2(taus, name):
    code, _ = run("hadamard", "--tau", taus[name], "--n", "1", "--x", "1", "--y", "0")
    assert code == 2


def test_usage_errors_exit_2(taus):
    assert run("hadamard", "--tau", taus["soliton1"])[0] == 2
    assert run("nonsense")[0] == 2
    assert run("hadamard", "--tau", taus["soliton1"], "--n", "1", "--x", "1", "--y", "0", "--precision", "8")[0] == 2
    assert run("hadamard", "--tau", taus["soliton1"], "--n", "99", "--x", "1", "--y", "0")[0] == 2
    assert run("hadamard", "--tau", "/nonexistent.json", "--n", "1", "--x", "1", "--y", "0")[0] == 2


def test_denominator_zero_is_input_error(taus):
    assert run("hadamard", "--tau", taus["rational1"], "--n", "1", "--x", "0", "--y", "1")[0] == 2


def test_grid_csv(taus):
    code, text = run("hadamard", "--tau", taus["soliton1"], "--n", "2", "--grid", "0:1:3,-1:0:2",
                     "--format", "csv", "--no-timestamp")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 6
    assert set(rows[0]) == {"n", "x", "y", "value"}
    vals = {(r["x"], r["y"]): float(r["value"]) for r in rows}
    # the grid point (0, 0) lies on the diagonal and is filled by the diagonal formula
    code, text = run("hadamard", "--tau", taus["soliton1"], "--n", "2", "--x", "0", "--diag", "--no-timestamp")
    assert abs(vals[("0.0", "0.0")] - float(json.loads(text)["value"])) < 1e-14


def test_byte_identical_without_timestamp(taus):
    argv = ["verify", "--tau", taus["soliton1"], "--suite", "kdv", "--seed", "3", "--no-timestamp"]
    assert run(*argv)[1] == run(*argv)[1]
    argv = ["hadamard", "--tau", taus["soliton1"], "--n", "4", "--x", "0.3", "--y", "-0.2", "--no-timestamp"]
    assert run(*argv)[1] == run(*argv)[1]


def test_json_value_round_trips_at_precision(taus):
    import mpmath
    from kdvheat import make_soliton
    from kdvheat.hadamard import hadamard_offdiag

    code, text = run("hadamard", "--tau", taus["soliton1"], "--n", "3", "--x", "0.7", "--y", "-0.4",
                     "--precision", "40", "--no-timestamp")
    with mpmath.workdps(50):
        got = mpmath.mpf(json.loads(text)["value"])
        ref = hadamard_offdiag(make_soliton([1]), 3, "0.7", "-0.4", 40)
        assert abs(got - ref) <= abs(ref) * mpmath.mpf(10) ** -38


def test_precision_environment_default(taus, monkeypatch):
    monkeypatch.setenv("KDVHEAT_PRECISION", "45")
    code, text = run("hadamard", "--tau", taus["soliton1"], "--n", "1", "--x", "0.7", "--y", "-0.4", "--no-timestamp")
    assert json.loads(text)["precision"] == 45


def test_module_entry_point(taus):
    proc = subprocess.run([sys.executable, "-m", "kdvheat", "gegenbauer", "--n", "1", "--lambda", "1/2",
                           "--no-timestamp"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["coefficients"] == ["0", "1"]
    proc = subprocess.run([sys.executable, "-m", "kdvheat", "hadamard", "--tau", taus["bad"], "--n", "1",
                           "--x", "1", "--y", "0"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2 and proc.stderr and not proc.stdout


def test_tolerance_table():
    assert tolerance("oracle") == TOLERANCES["oracle"] == 1e-6
    assert tolerance("oracle", {"oracle": 1e-3}) == 1e-3
    with pytest.raises(KeyError):
        tolerance("nope")
