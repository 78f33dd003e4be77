import json
import subprocess
import sys

import pytest

from askey_wilson.cli import run


def test_poly_sym_zero(capsys):
    assert run(["poly", "--kind", "sym", "--m", "0"]) == 0
    assert capsys.readouterr().out.strip() == "1*x^0"


def test_poly_nonsym_text(capsys):
    assert run(["poly", "--kind", "nonsym", "--m", "-1", "--method", "rodrigues"]) == 0
    assert capsys.readouterr().out.strip() == "1*x^-1 + 1513/3024*x^0"


def test_poly_json(capsys):
    assert run(["--json", "poly", "--kind", "Eplus", "--m", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == 1 and doc["polynomial"]["kind"] == "renorm_sym"


def test_unknown_subcommand():
    assert run(["frobnicate"]) == 2


@pytest.mark.parametrize("argv", [
    ["poly", "--kind", "sym"],
    ["poly", "--kind", "sym", "--m", "0", "--params", "1,2,3"],
    ["poly", "--kind", "antisym", "--m", "0"],
    ["verify", "--tol", "-1"],
    ["verify", "--max-degree", "0"],
    ["constant-term", "--backend", "float", "--precision", "24"],
    ["poly", "--kind", "sym", "--m", "1", "--params", "1/2,0,2/3,5/7,3/4"],
])
def test_bad_arguments(argv):
    assert run(argv) == 2


def test_verify_hecke_deterministic(capsys):
    assert run(["verify", "--suite", "hecke", "--max-degree", "3", "--json"]) == 0
    first = capsys.readouterr().out
    assert run(["verify", "--suite", "hecke", "--max-degree", "3", "--json"]) == 0
    assert capsys.readouterr().out == first
    doc = json.loads(first)
    assert doc["status"] == "pass" and "elapsed" not in doc["checks"][0]
    names = [c["name"] for c in doc["checks"]]
    assert names == sorted(names)


def test_verify_failure_exit_code(capsys):
    # k1^2 = q puts P_1 on a repeated eigenvalue, so the polynomial checks fail
    code = run(["verify", "--suite", "polys", "--max-degree", "2", "--params", "1/2,2,2,5/7,3/4"])
    assert code == 1
    assert "overall: fail" in capsys.readouterr().out


def test_constant_term(capsys):
    assert run(["constant-term", "--tol", "1e-20", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["rel_gap"] < 1e-20


def test_norms(capsys):
    assert run(["norms", "--max-degree", "2"]) == 0
    assert "overall: pass" in capsys.readouterr().out


def test_transform_round_trip(tmp_path, capsys):
    src = tmp_path / "f.txt"
    src.write_text("1*x^-1 + 2*x^0 + 3*x^2\n")
    assert run(["transform", "--input", str(src), "--direction", "fwd", "--json"]) == 0
    fwd = tmp_path / "g.json"
    fwd.write_text(capsys.readouterr().out)
    assert run(["transform", "--input", str(fwd), "--direction", "inv", "--json"]) == 0
    terms = json.loads(capsys.readouterr().out)["polynomial"]["terms"]
    vals = {t["e"]: float(t["c"]["re"]) for t in terms}
    assert vals[2] / vals[-1] == pytest.approx(3, rel=1e-12)
    assert abs(vals.get(1, 0.0)) < 1e-40
    assert run(["transform", "--input", str(src), "--direction", "inv"]) == 2


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "askey_wilson", "poly", "--kind", "sym", "--m", "0"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0 and out.stdout.strip() == "1*x^0"
