import json
import subprocess
import sys

import pytest

from gnlc.cli import main

BROKEN_JACOBI = "\n".join([
    '{"type": "header", "format": "gnlc-algebra", "version": 1, "name": "broken"}',
    '{"type": "basis", "name": "e1", "degree": -1}',
    '{"type": "basis", "name": "e2", "degree": -1}',
    '{"type": "basis", "name": "e3", "degree": -1}',
    '{"type": "basis", "name": "z", "degree": -2}',
    '{"type": "basis", "name": "u", "degree": -3}',
    '{"type": "bracket", "left": "e1", "right": "e2", "value": [["z", "1"]]}',
    '{"type": "bracket", "left": "e3", "right": "z", "value": [["u", "-1"]]}',
]) + "\n"

BAD_COEFF = "\n".join([
    '{"type": "basis", "name": "a", "degree": -1}',
    '{"type": "basis", "name": "b", "degree": -1}',
    '{"type": "basis", "name": "c", "degree": -2}',
    '{"type": "bracket", "left": "a", "right": "b", "value": [["c", "1/0"]]}',
]) + "\n"


def run_cli(*args, env=None):
    import os
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run([sys.executable, "-m", "gnlc", *args],
                          capture_output=True, text=True, env=full_env)


def test_dump_validate_round_trip(tmp_path):
    dump = run_cli("dump", "--algebra", "heisenberg:2")
    assert dump.returncode == 0
    path = tmp_path / "h2.gnlc"
    path.write_text(dump.stdout)
    res = run_cli("validate", str(path))
    assert res.returncode == 0
    assert "valid: yes" in res.stdout
    # the dump itself round-trips byte-identically
    dump2 = run_cli("dump", "--algebra", "heisenberg:2")
    assert dump2.stdout == dump.stdout


def test_validate_broken_jacobi_names_triple(tmp_path):
    path = tmp_path / "broken.gnlc"
    path.write_text(BROKEN_JACOBI)
    res = run_cli("validate", str(path))
    assert res.returncode == 1
    assert "jacobi" in res.stdout.lower()
    assert "e1" in res.stdout and "e2" in res.stdout and "e3" in res.stdout


def test_validate_zero_denominator_is_parse_error(tmp_path):
    path = tmp_path / "bad.gnlc"
    path.write_text(BAD_COEFF)
    res = run_cli("validate", str(path))
    assert res.returncode == 2
    assert "1/0" in res.stderr


def test_validate_missing_file(tmp_path):
    res = run_cli("validate", str(tmp_path / "nope.gnlc"))
    assert res.returncode == 2


def test_cohomology_known_values_and_determinism():
    res = run_cli("cohomology", "--algebra", "free:3", "--coeffs", "adjoint-bar",
                  "--degree", "2", "--hom", "1:4")
    assert res.returncode == 0
    table = json.loads(res.stdout)
    assert sum(c["dim"] for c in table["cells"]) == 27
    res2 = run_cli("cohomology", "--algebra", "free:3", "--coeffs", "adjoint-bar",
                   "--degree", "2", "--hom", "1:4")
    assert res2.stdout == res.stdout

    res = run_cli("cohomology", "--algebra", "heisenberg:2", "--coeffs",
                  "quotient:-1", "--degree", "1", "--hom", "1:1")
    assert json.loads(res.stdout)["cells"][0]["dim"] == 0


def test_cohomology_threads_do_not_change_output():
    args = ("cohomology", "--algebra", "heisenberg:2", "--coeffs", "adjoint-g",
            "--degree", "2")
    a = run_cli(*args, env={"GNLC_THREADS": "1"})
    b = run_cli(*args, env={"GNLC_THREADS": "4"})
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_cohomology_tsv_format():
    res = run_cli("cohomology", "--algebra", "heisenberg:2", "--coeffs",
                  "quotient:-1", "--degree", "1", "--hom", "1:2", "--format", "tsv")
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "module\tdegree\thomogeneity\tdim"
    assert len(lines) == 3


def test_cohomology_unknown_identifier():
    res = run_cli("cohomology", "--algebra", "nope:9", "--degree", "1")
    assert res.returncode == 2


def test_verify_pass_and_exit_codes():
    res = run_cli("verify", "prolongation", "--algebra", "heisenberg:2", "--g0", "u")
    assert res.returncode == 0
    assert "RESULT: PASS" in res.stdout
    assert "PASS first-prolongation" in res.stdout

    res = run_cli("verify", "classify", "--algebra", "heisenberg:4")
    assert res.returncode == 3

    res = run_cli("verify", "free-h2", "--algebra", "heisenberg:2")
    assert res.returncode == 3


def test_verify_reports_provenance_tags():
    res = run_cli("verify", "split", "--algebra", "free:3")
    assert res.returncode == 0
    assert "[PAPER]" in res.stdout


def test_main_callable_in_process(capsys):
    code = main(["cohomology", "--algebra", "heisenberg:2", "--coeffs",
                 "quotient:-1", "--degree", "1", "--hom", "1:1"])
    assert code == 0
    out = capsys.readouterr().out
    assert json.loads(out)["cells"][0]["dim"] == 0
