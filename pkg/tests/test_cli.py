import io
import subprocess
import sys

import numpy as np
import pytest

from orthopmat.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_build_hermite_coo():
    code, out = call("build", "--family", "hermite", "--matrix", "N", "--n", "5", "--format", "coo")
    assert code == 0
    assert out.splitlines() == [f"{j - 1} {j} {2 * j}" for j in range(1, 5)]


def test_build_legendre_single_entry():
    assert call("build", "--family", "legendre", "--matrix", "M", "--n", "1") == (0, "0\n")


def test_build_exact_and_oax():
    code, out = call("build", "--family", "legendre", "--matrix", "Oax", "--a", "-1",
                     "--n", "3", "--field", "exact")
    assert code == 0
    assert out.splitlines() == ["1,-1/3,0", "1,0,-1/5", "0,1/3,0"]


def test_explicit_and_recursive_agree():
    base = ["build", "--family", "chebyshev3", "--matrix", "O", "--n", "40"]
    _, a = call(*base, "--explicit")
    _, b = call(*base, "--recursive")
    ea = np.loadtxt(io.StringIO(a), delimiter=",")
    eb = np.loadtxt(io.StringIO(b), delimiter=",")
    assert np.max(np.abs(ea - eb) / np.maximum(np.abs(ea), 1)) <= 1e-13


def test_build_is_deterministic():
    argv = ["build", "--family", "jacobi", "--alpha", "2", "--beta", "3/7", "--matrix", "N", "--n", "30"]
    assert call(*argv) == call(*argv)


@pytest.mark.parametrize("argv", [
    ["build", "--family", "legendre", "--matrix", "Q", "--n", "3"],
    ["build", "--family", "legendre", "--matrix", "M", "--n", "0"],
    ["build", "--family", "legendre", "--matrix", "Oax", "--n", "3"],
    ["build", "--family", "legendre", "--matrix", "M", "--a", "1", "--n", "3"],
    ["build", "--family", "gegenbauer", "--lambda", "0", "--matrix", "M", "--n", "3"],
    ["build", "--family", "jacobi", "--alpha", "1", "--matrix", "M", "--n", "3"],
    ["build", "--family", "jacobi", "--alpha", "1", "--beta", "2", "--matrix", "O", "--n", "3", "--explicit"],
    ["build", "--family", "jacobi", "--alpha", "0.5", "--beta", "x", "--matrix", "M", "--n", "3"],
    ["build", "--family", "legendre", "--matrix", "M", "--n", "3", "--explicit", "--recursive"],
    ["sweep", "--test", "moments", "--family", "hermite", "--nmax", "20"],
    ["sweep", "--test", "genfun", "--family", "hermite", "--nmax", "20", "--k", "0"],
    ["sweep", "--test", "diffeq", "--family", "bessel", "--nmax", "20"],
    ["sweep", "--test", "diffeq", "--family", "legendre", "--nmax", "20", "--nmin", "40"],
    ["assemble", "--family", "legendre", "--n", "4", "--spec", "/nonexistent/spec"],
    [],
])
def test_flag_errors_exit_2(argv, capsys):
    assert call(*argv)[0] == 2
    assert capsys.readouterr().err


def test_verify_oracle():
    code, out = call("verify", "oracle", "--family", "legendre", "--n", "30")
    assert code == 0 and out.startswith("ok")
    assert call("verify", "oracle", "--family", "jacobi", "--alpha", "2", "--beta", "3", "--n", "10")[0] == 0


def test_verify_reports_first_mismatch(monkeypatch, capsys):
    from fractions import Fraction
    from orthopmat import cli
    monkeypatch.setattr(cli, "verify_family",
                        lambda fam, n, limits: [("N recursive", (0, 2, Fraction(1), Fraction(3)))])
    assert call("verify", "oracle", "--family", "legendre", "--n", "4")[0] == 1
    err = capsys.readouterr().err
    assert "N recursive" in err and "(0,2)" in err and "built 1, oracle 3" in err


def test_assemble(tmp_path):
    spec = tmp_path / "op.txt"
    spec.write_text("# Legendre operator without its eigenvalue term\nd 2 1 0 -1\nd 1 0 -2\nd 0 6\n")
    code, out = call("assemble", "--family", "legendre", "--n", "6", "--spec", str(spec),
                     "--field", "exact")
    assert code == 0
    rows = [r.split(",") for r in out.splitlines()]
    assert rows[2][2] == "0"  # P_2 solves the equation with n(n+1) = 6
    spec.write_text("i 1 -1 1\nd 1 1\n")
    code, out = call("assemble", "--family", "legendre", "--n", "5", "--spec", str(spec),
                     "--field", "exact", "--format", "coo")
    assert code == 0 and out
    spec.write_text("z 1 1\n")
    assert call("assemble", "--family", "legendre", "--n", "5", "--spec", str(spec))[0] == 2


def test_sweep_to_file(tmp_path):
    path = tmp_path / "out.csv"
    code, out = call("sweep", "--test", "diffeq", "--family", "chebyshev1", "--nmax", "100",
                     "--step", "20", "--out", str(path))
    assert code == 0 and out == ""
    lines = path.read_text().splitlines()
    assert lines[0] == "test,family,params,n,k,z,residual,residual_unrestricted"
    assert len(lines) == 6 and all(l.split(",")[6] == "0" for l in lines[1:])


def test_sweep_genfun_stdout():
    code, out = call("sweep", "--test", "genfun", "--family", "gegenbauer", "--lambda", "1/7",
                     "--nmax", "40", "--step", "20", "--k", "1,2", "--z", "1/10")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 1 + 2 * 2 * 2
    assert lines[1].startswith("genfun:D,gegenbauer,lambda=1/7,20,1,0.1,")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "orthopmat", "build", "--family", "laguerre",
                          "--matrix", "N", "--n", "3", "--format", "coo"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.splitlines() == ["0 1 -1", "0 2 -1", "1 2 -1"]
    bad = subprocess.run([sys.executable, "-m", "orthopmat", "build"], capture_output=True, text=True)
    assert bad.returncode == 2
