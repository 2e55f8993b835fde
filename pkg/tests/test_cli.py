from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qinv.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_alcove(capsys):
    code, out, _ = run(capsys, "alcove", "--algebra", "sl2", "--r", "5")
    assert code == 0
    assert out.split() == ["0", "1"]


def test_alcove_bad_r(capsys):
    code, _, err = run(capsys, "alcove", "--algebra", "sl2", "--r", "9")
    assert code == 2 and "--r" in err


def test_tau_empty(capsys):
    code, out, _ = run(capsys, "tau", "--diagram", "empty", "--r", "5")
    assert code == 0
    js = json.loads(out)
    assert js["kappa_exp"] == 1
    assert js["m"] == 0 and js["sigma"] == [0, 0] and js["betti1"] == 0
    assert set(js) == {"r", "kappa_exp", "coeffs", "den", "m", "sigma", "betti1", "valuation"}
    assert all(isinstance(c, str) for c in js["coeffs"]) and isinstance(js["den"], str)


def test_periodicity_two_rows(capsys):
    code, out, _ = run(
        capsys, "periodicity", "--manifold", "builtin:poincare", "--rs", "5,7", "--format", "json"
    )
    assert code == 0
    js = json.loads(out)
    assert [e["r"] for e in js["entries"]] == [5, 7]


def test_periodicity_non_homology_sphere(capsys):
    code, _, err = run(capsys, "periodicity", "--manifold", "s1xs2", "--rs", "5")
    assert code == 1 and "determinant" in err


def test_usage_errors(capsys):
    assert main([]) == 2
    code, _, err = run(capsys, "tau", "--diagram", "nosuchthing", "--r", "5")
    assert code == 2 and "--diagram" in err
    code, _, err = run(capsys, "tau", "--diagram", "unknot(1)", "--r", "5", "--framing", "C9=1")
    assert code == 2 and "--framing" in err
    code, _, err = run(capsys, "tau", "--diagram", "unknot(1)", "--r", "5", "--colors", "C1=x")
    assert code == 2 and "--colors" in err


def test_diagram_file_with_flags(tmp_path, capsys):
    f = tmp_path / "hopf.txt"
    f.write_text("# Hopf link\ncupl cupr\nid x+ id\nid x+ id\ncapl capr\n")
    code, out, _ = run(
        capsys, "projective", "--diagram", str(f), "--r", "5", "--surgery", "C1,C2", "--framing", "C1=0,C2=0"
    )
    assert code == 0
    js = json.loads(out)
    assert js["m"] == 2 and js["coeffs"] == ["1", "0", "0", "0"] and js["kappa_exp"] == 0


def test_jpoly_and_fvalue(tmp_path, capsys):
    code, out, _ = run(capsys, "jpoly", "--diagram", "cupl / capl", "--colors", "C1=1", "--format", "table")
    assert code == 0 and out.strip() == "v^2 + 1 + v^-2"
    code, out, _ = run(capsys, "fvalue", "--diagram", "unknot(0)", "--r", "5", "--workers", "1")
    assert code == 0 and json.loads(out)["m"] == 1


def test_jpoly_with_coupons(tmp_path, capsys):
    cf = tmp_path / "c.json"
    cf.write_text(json.dumps({"f": {"domain": [[1, "+"]], "codomain": [[1, "+"]],
                                    "entries": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}}))
    df = tmp_path / "d.txt"
    df.write_text("cupl\ncoupon:f id\ncapl\n")
    code, out, _ = run(capsys, "jpoly", "--diagram", str(df), "--coupons", str(cf), "--r", "5")
    assert code == 0
    assert json.loads(out)["coeffs"] == ["1", "0", "1", "1"]  # [3] = 1 + xi^2 + xi^3


def test_divisibility_and_tqftdim(capsys):
    code, out, _ = run(capsys, "divisibility", "--diagram", "hopf(0,0)", "--r", "7")
    assert code == 0 and json.loads(out) == {"r": 7, "required": 4, "actual": 4, "pass": True}
    code, out, _ = run(capsys, "tqftdim", "--genus", "1", "--r", "5")
    assert code == 0 and json.loads(out)["dimension"] == 2
    code, out, _ = run(capsys, "tqftdim", "--genus", "0", "--r", "7", "--marks", "2:+,2:-")
    assert json.loads(out)["dimension"] == 1


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "weights", "--max-color", "2")
    assert code == 0 and "n=2: self-chord 15" in out
    code, out, _ = run(
        capsys, "verify", "--suite", "degree", "--diagram", "unknot(0)", "--max-color", "8", "--order", "3"
    )
    assert code == 0 and "h^2: degree 3 <= 5" in out


def test_workers_do_not_change_output(capsys):
    outs = []
    for w in ("1", "2"):
        code, out, _ = run(capsys, "tau", "--diagram", "hopf(0,1)", "--r", "7", "--workers", w)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


@pytest.mark.parametrize(
    "cmd", ["alcove", "jpoly", "fvalue", "tau", "projective", "divisibility", "tqftdim", "periodicity", "verify"]
)
def test_every_subcommand_has_help(cmd):
    res = subprocess.run(
        [sys.executable, "-m", "qinv", cmd, "--help"], capture_output=True, text=True
    )
    assert res.returncode == 0 and "usage" in res.stdout
