import json
import subprocess
import sys

import pytest

from galcount.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bound_text(capsys):
    code, out, _ = run(capsys, "bound", "symmetric:4")
    assert code == 0
    assert "exponent: 1/2 (+eps)" in out
    assert "* " in out  # chosen branch marker


def test_bound_record(capsys):
    code, out, _ = run(capsys, "bound", "alternating:5", "--format", "record")
    rec = json.loads(out)
    assert code == 0
    assert rec["exponent"] == {"rational": "7/48", "roots": []}
    assert rec["trace"]["rule"] == "min"


def test_bound_modes(capsys):
    assert run(capsys, "bound", "smallgroup:24:12", "--mode", "no-cfsg")[1].count("5/6") >= 1
    code, out, _ = run(capsys, "bound", "family:J3", "--mode", "optimal")
    assert code == 0 and "863441/2009318400" in out
    code, out, _ = run(capsys, "bound", "symmetric:8", "--mode", "explicit")
    assert code == 0 and "constant:" in out


def test_bound_profile(capsys):
    code, out, _ = run(capsys, "bound", "alternating:5", "--profile", "1^5")
    assert code == 0 and "invariant-profile" in out


def test_input_errors(capsys):
    code, _, err = run(capsys, "bound", "nonsense:3")
    assert code == 2 and err.startswith("error: input")
    code, _, err = run(capsys, "bound", "cyclic:4", "--profile", "a,b")
    assert code == 2
    assert run(capsys, "bound")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_invariants(capsys):
    code, out, _ = run(capsys, "invariants", "smallgroup:8:4", "--format", "record")
    rec = json.loads(out)
    assert code == 0
    assert rec["profile"] == [1, 2, 2, 2, 2, 3, 3, 3]
    assert rec["independence"].startswith("VerifiedRandomized")


def test_base(capsys):
    code, out, _ = run(capsys, "base", "symmetric:5")
    assert code == 0 and "verified: True" in out
    code, out, _ = run(capsys, "base", "cyclic:13", "--strong", "2")
    assert code == 0 and "StrongSet" in out
    code, out, _ = run(capsys, "base", "symmetric:5", "--strong", "2", "--budget", "50")
    assert code == 0 and "not a proof of absence" in out


def test_stabprob(capsys):
    code, out, _ = run(capsys, "stabprob", "th_classes.txt")
    assert code == 0
    assert "419448082/207981421875" in out
    assert "2992265015279081/5090286441648234375000" in out
    code, _, err = run(capsys, "stabprob", "missing.txt")
    assert code == 2


def test_count(capsys):
    code, out, _ = run(capsys, "count", "quadratic", "--X", "10")
    assert code == 0 and "quadratic count: 6" in out
    code, out, _ = run(capsys, "count", "abelian", "--X", "200", "--degree-cap", "4", "--format", "record")
    assert json.loads(out)["counts_by_group"] == {"C2": 122, "C2xC2": 1, "C3": 3, "C4": 1}
    code, out, _ = run(capsys, "count", "abelian", "--X", "60", "--csv")
    lines = out.strip().splitlines()
    assert lines[0].startswith("conductor")
    assert lines[1].startswith("3, ")
    code, out, _ = run(capsys, "count", "galois", "--X", "49")
    assert "C3: 1" in out and "not exact" in out


def test_tail(capsys):
    code, out, _ = run(capsys, "tail", "--log-X", "100")
    assert code == 0 and "tail = 0" in out
    code, out, _ = run(capsys, "tail", "--log-X", "15600", "--format", "record")
    rec = json.loads(out)
    assert code == 0 and rec["resum_check"] and rec["terms"] > 0
    assert run(capsys, "tail")[0] == 2
    assert run(capsys, "tail", "--X", "5")[0] == 2


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--only", "2,3")
    assert code == 0
    assert out.count("[PASS]") == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "galcount", "bound", "cyclic:3"], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0 and "exponent: 1/2" in proc.stdout
