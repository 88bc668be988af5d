import csv
import io
import json
import subprocess
import sys

import pytest

from divisum.cli import main, parse_grid

from .reference_values import ref


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run(*argv, "--output", "json")
    return code, json.loads(out)


@pytest.mark.parametrize("argv,key,tol", [
    (["theta4", "z=0", "q=0.1"], "theta4_0_0.1", 1e-15),
    (["theta4", "z=0.2i", "q=0.1"], "theta4_0.2i_0.1", 1e-15),
    (["zeta", "s=2"], "zeta_2", 1e-15),
    (["rrcf", "q=0.01", "depth=20"], "rrcf_0.01_20", 1e-15),
    (["eta_product", "q=0.1"], "eta_0.1", 1e-15),
    (["hurwitz_zeta", "s=2", "a=0.5"], "hurwitz_2_half", 1e-15),
    (["periodic_L", "X=x2:5,1,2", "s=2"], "L_x2_5_1_2_s2", 1e-14),
    (["lambert_sum", "c=phi", "x=1", "sign=1"], "lambert_phi_plus_1", 1e-14),
    (["mellin", "f=csch2:one", "s=4"], "mellin_ex1_s4", 1e-10),
])
def test_eval_values(argv, key, tol):
    code, rec = run_json("eval", *argv)
    assert code == 0
    assert rec["value"] == pytest.approx(ref(key), rel=tol)
    assert set(rec["depths"]) == {"series", "product", "quadrature"}


def test_eval_misc():
    assert run_json("eval", "gcd_sum", "f=id", "n=6")[1]["value"] == 15
    assert run_json("eval", "theta2", "q=0.1")[0] == 0
    assert run_json("eval", "theta3", "q=0.1")[1]["value"] == pytest.approx(ref("theta3_0.1"))
    assert run_json("eval", "mellin", "f=gauss", "s=1")[1]["value"] == pytest.approx(0.886226925452758, rel=1e-10)
    assert run_json("eval", "mellin", "f=exp", "s=3")[1]["value"] == pytest.approx(2.0, rel=1e-10)
    code, rec = run_json("eval", "log_theta_quotient_d2", "p=5", "a=1", "b=2", "x=1")
    assert code == 0 and rec["value"] is not None


def test_eval_text_and_csv():
    code, out, _ = run("eval", "zeta", "s=2")
    assert code == 0 and out.startswith("zeta = 1.6449340668")
    code, out, _ = run("eval", "zeta", "s=2", "--output", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "name" and float(rows[1][2]) == pytest.approx(ref("zeta_2"))


def test_eval_high_precision():
    code, out, _ = run("eval", "zeta", "s=2", "--precision", "high")
    assert code == 0 and out.startswith("zeta = 1.64493406684822643647241516664602518")


@pytest.mark.parametrize("argv,code", [
    (["eval", "nope"], 2),
    (["eval", "zeta"], 2),
    (["eval", "zeta", "s"], 2),
    (["frobnicate"], 2),
    (["verify", "NOPE"], 2),
    (["verify", "PROP1", "y=1"], 3),
    (["eval", "zeta", "s=1"], 3),
    (["eval", "theta4", "z=0", "q=1.5"], 3),
    (["verify", "PROP1", "x=-1"], 3),
    (["verify", "PROP1", "--tol", "0"], 2),
    (["verify", "PROP1", "--max-terms", "0"], 2),
    (["eval", "lambert_sum", "c=one", "x=1e-4", "--max-terms", "100"], 4),
    (["verify", "PROP1", "x=0.001", "--max-terms", "50"], 4),
    (["verify", "THM2_5"], 1),
])
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


def test_verify_examples():
    assert run("verify", "PROP1", "f=poly:0,1", "x=1")[0] == 0
    code, d = run_json("verify", "THM1", "f=poly:0,1", "a=1", "b=1")
    assert code == 0 and d["lhs"] == 1 and d["rhs"] == 1
    code, d = run_json("verify", "MELLIN_EX4", "s=1.5", "--tol", "1e-5")
    assert code == 0 and d["tol"] == 1e-5


def test_verify_json_round_trip_is_byte_identical():
    _, out, _ = run("verify", "THM2_4", "x=0.5", "--output", "json")
    assert json.dumps(json.loads(out), indent=2, ensure_ascii=False) + "\n" == out
    d = json.loads(out)
    assert set(d) == {"id", "params", "lhs", "rhs", "abs_err", "rel_err", "tol", "depths", "status", "notes"}


def test_verify_is_deterministic():
    assert run("verify", "RRCF_EX3", "x=0.7", "--output", "json") == run("verify", "RRCF_EX3", "x=0.7", "--output", "json")


def test_random_polynomial_seeded():
    a = run_json("verify", "PROP1", "f=random:6", "--seed", "3")[1]
    b = run_json("verify", "PROP1", "f=random:6", "--seed", "3")[1]
    c = run_json("verify", "PROP1", "f=random:6", "--seed", "4")[1]
    assert a == b and a["params"]["f"] != c["params"]["f"] and a["status"] == "pass"


def test_sweep_examples():
    code, out, _ = run("sweep", "EQ11", "s=2,4", "x=0.5,1,2")
    assert code == 0 and out.strip().endswith("# 6/6 pass, 0 fail, 0 saturated")
    code, out, _ = run("sweep", "THM2_4", "p=5", "a=1", "b=2", "x=0.5,1,2")
    assert code == 0 and "# 3/3 pass" in out
    code, out, _ = run("sweep", "EQ11")
    assert code == 0 and "# 0/0 pass" in out


def test_sweep_json_and_csv():
    code, d = run_json("sweep", "PROP1", "x=0.5:2:0.5")
    assert code == 0 and d["summary"] == {"total": 4, "pass": 4, "fail": 0, "saturated": 0}
    assert [r["params"]["x"] for r in d["reports"]] == [0.5, 1.0, 1.5, 2.0]
    code, out, _ = run("sweep", "PROP1", "x=1,2", "--output", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 4 and rows[0][0] == "id" and rows[-1][0].startswith("# 2/2")


def test_sweep_failure_exit():
    code, d = run_json("sweep", "PROP1", "x=1,-1")
    assert code == 1 and d["summary"]["fail"] == 1


def test_parse_grid():
    assert parse_grid("EQ11", ["x=0.5:2:0.5,s=2,4"]) == {"x": [0.5, 1.0, 1.5, 2.0], "s": ["2", "4"]}
    assert parse_grid("PROP1", ["f=poly:1,2|poly:0,1", "x=1"]) == {"f": ["poly:1,2", "poly:0,1"], "x": ["1"]}
    assert parse_grid("MELLIN_PROP21", ["X=x2:5,1,2|alt", "s=3"])["X"] == ["x2:5,1,2", "alt"]


def test_list():
    code, out, _ = run("list")
    assert code == 0 and len(out.strip().splitlines()) == 23
    code, rows = run_json("list")
    assert isinstance(rows, list) and len(rows) == 23 and all(r["reference"] for r in rows)
    code, out, _ = run("list", "--output", "csv")
    assert len(list(csv.reader(io.StringIO(out)))) == 24


def test_environment_precision(monkeypatch):
    monkeypatch.setenv("DIVISUM_PRECISION", "high")
    code, rec = run_json("eval", "zeta", "s=2")
    assert rec["precision"] == "high"


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "divisum", "eval", "zeta", "s=2"], capture_output=True, text=True)
    assert p.returncode == 0 and "1.6449340668" in p.stdout
    p = subprocess.run([sys.executable, "-m", "divisum", "eval", "zeta", "s=-1"], capture_output=True, text=True)
    assert p.returncode == 3 and p.stderr
