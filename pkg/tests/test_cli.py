import io
import json
import subprocess
import sys

import pytest

from fermatcert.cli import main
from fermatcert.textformat import parse_document
from fermatcert.theorems import Certificate


def run(argv, capsys):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue(), capsys.readouterr().err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


THEOREM_A_Q = "1\n1\n(0.5,0) * z0^2 + 2 * z1^2 + 1 * z2^2\n"


def test_theorem_a_exit_codes(capsys):
    assert run(["check-theorem-a", "--d", "9", "--eps0", "0.5", "--eps1", "2"], capsys)[0] == 0
    assert run(["check-theorem-a", "--d", "8", "--eps0", "0.5", "--eps1", "2"], capsys)[0] == 2
    assert run(["check-theorem-a", "--d", "9", "--eps0", "x", "--eps1", "1"], capsys)[0] == 64


def test_theorem_a_eps0_zero_exit(capsys):
    # hypotheses-not-met: the residual curve degenerates and the engine finds an escaping line
    code, out, _ = run(["check-theorem-a", "--d", "9", "--eps0", "0", "--eps1", "1"], capsys)
    assert code == 2
    assert parse_document(out)["verdict"] == "hypotheses-not-met"


def test_theorem_a_certificate_round_trip(capsys, tmp_path):
    target = str(tmp_path / "cert.txt")
    code, out, _ = run(["check-theorem-a", "--d", "9", "--eps0", "1+0i", "--eps1", "(1,0)", "-o", target], capsys)
    assert code == 0 and out == ""
    text = open(target).read()
    cert = Certificate.from_dict(parse_document(text))
    assert cert.verdict == "verified-hyperbolic" and len(cert.case_records) == 10


def test_theorem_b_branches(capsys):
    code, out, err = run(["check-theorem-b", "--a", "1", "--b", "0", "--d", "6", "--e", "1"], capsys)
    assert code == 0 and "branch (i)" in err
    code, out, err = run(["check-theorem-b", "--a", "1", "--b", "1", "--d", "9", "--e", "2"], capsys)
    assert code == 0 and "branch (iv)" in err
    assert parse_document(out)["genus_records"][0]["genus"] == 25
    assert run(["check-theorem-b", "--a", "0", "--b", "1", "--d", "9", "--e", "2"], capsys)[0] == 64
    assert run(["check-theorem-b", "--a", "2", "--b", "1", "--d", "9", "--e", "0"], capsys)[0] == 2


def test_human_format(capsys):
    code, out, _ = run(["--format", "human", "check-theorem-b", "--a", "3", "--b", "1", "--d", "9", "--e", "0"], capsys)
    assert code == 0 and out.startswith("theorem B: verified-hyperbolic")


def test_borel_cases(capsys, tmp_path):
    qa = write(tmp_path, "qa.txt", THEOREM_A_Q)
    code, out, _ = run(["borel-cases", "--mode", "logarithmic", "--d", "9", "--deltas", "0,0,2", "--q-file", qa], capsys)
    assert code == 0 and len(out.splitlines()) == 11
    code, _, err = run(["borel-cases", "--mode", "logarithmic", "--d", "8", "--deltas", "0,0,2", "--q-file", qa], capsys)
    assert code == 2 and "d > 6+sum(delta)" in err
    qb = write(tmp_path, "qb.txt", "1\n1\n1\n")
    code, out, _ = run(["borel-cases", "--mode", "compact", "--d", "6", "--deltas", "0,0,0", "--q-file", qb], capsys)
    assert code == 0 and len(out.splitlines()) == 5
    assert run(["borel-cases", "--mode", "compact", "--d", "6", "--deltas", "0,0", "--q-file", qb], capsys)[0] == 64
    assert run(["borel-cases", "--mode", "compact", "--d", "6", "--deltas", "0,0,1", "--q-file", qb], capsys)[0] == 64


def test_nevanlinna_fmt(capsys, tmp_path):
    m = write(tmp_path, "map.txt", "-2 + 1 * z^1\n1\n0\n")
    code, out, err = run(["nevanlinna", "fmt", "--map", m, "--divisor", "z0", "--grid", "4:100:8"], capsys)
    assert code == 0 and err.startswith("PASS fmt")
    assert out.splitlines()[0] == "r,T,N,m,deviation" and len(out.splitlines()) == 9
    assert run(["nevanlinna", "fmt", "--map", m, "--grid", "4:100:8"], capsys)[0] == 64


def test_nevanlinna_smt_and_pullback(capsys, tmp_path):
    m = write(tmp_path, "map.txt", "1 * z^1\n1 * z^2\n1\n")
    H = write(tmp_path, "H.txt", "z0\nz1\nz2\nz0 + z1 + z2\n")
    code, _, err = run(["nevanlinna", "smt", "--map", m, "--hyperplanes", H, "--grid", "5:50:5"], capsys)
    assert code == 0 and err.startswith("PASS smt")
    qa = write(tmp_path, "qa.txt", THEOREM_A_Q)
    lin = write(tmp_path, "lin.txt", "1 * z^1\n1\n0\n")
    code, _, err = run(
        ["nevanlinna", "pullback", "--map", lin, "--mode", "log", "--d", "9", "--deltas", "0,0,2", "--q-file", qa, "--grid", "5:50:5"],
        capsys,
    )
    assert code == 0 and "C1=" in err


def test_build_xn(capsys):
    code, out, err = run(["build-xn", "--n", "1", "--d", "5", "--e", "2"], capsys)
    assert code == 0 and out.count("+") == 2 and "terms: 3" in err
    code, _, err = run(["build-xn", "--n", "2", "--d", "2", "--e", "1"], capsys)
    assert code == 0 and "degree: 4" in err


def test_build_xn_cap(capsys, tmp_path):
    cfg = write(tmp_path, "cfg.json", json.dumps({"term_cap": 50_000}))
    assert run(["build-xn", "--n", "3", "--d", "4", "--e", "1", "--config", cfg], capsys)[0] == 0
    assert run(["--config", cfg, "build-xn", "--n", "5", "--d", "4", "--e", "1"], capsys)[0] == 4


def test_usage_errors(capsys):
    assert run([], capsys)[0] == 64
    assert run(["no-such-command"], capsys)[0] == 64
    assert run(["check-theorem-a", "--d", "9"], capsys)[0] == 64
    assert run(["--config", "/nonexistent.json", "build-xn", "--n", "1", "--d", "3", "--e", "1"], capsys)[0] == 64


def test_env_config(capsys, tmp_path, monkeypatch):
    cfg = write(tmp_path, "cfg.json", json.dumps({"output_format": "human"}))
    monkeypatch.setenv("FERMATCERT_CONFIG", cfg)
    code, out, _ = run(["check-theorem-b", "--a", "3", "--b", "1", "--d", "9", "--e", "0"], capsys)
    assert code == 0 and out.startswith("theorem B")


def test_byte_identical_reruns(capsys):
    argv = ["check-theorem-a", "--d", "10", "--eps0", "0.5", "--eps1", "2", "--seed", "3"]
    assert run(argv, capsys)[1] == run(argv, capsys)[1]


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "fermatcert.cli", "build-xn", "--n", "1", "--d", "3", "--e", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and "z0^3" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "fermatcert.cli", "--bogus"], capture_output=True, text=True)
    assert proc.returncode == 64


def test_build_xn_default_cap(capsys):
    code, _, err = run(["build-xn", "--n", "5", "--d", "9", "--e", "2"], capsys)
    assert code == 4 and "cap" in err


def test_rational_scalars(capsys):
    code, out, err = run(["check-theorem-b", "--a", "1/512", "--b", "2", "--d", "9", "--e", "2"], capsys)
    assert code == 0 and "branch (iv)" in err
    assert parse_document(out)["parameters"]["a"] == "1/512"
