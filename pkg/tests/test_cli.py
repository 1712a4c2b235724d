import json
import subprocess
import sys
from pathlib import Path

import pytest

from qpermcoh.cli import InputError, JobConfig, main, run, validate_matrix
from qpermcoh.errors import NotSquare, ParseError, WindowTooSmall

MATRICES = Path(__file__).resolve().parent.parent / "matrices"


def invoke(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def report(capsys, *argv):
    code, out = invoke(capsys, *argv)
    return code, json.loads(out)


# --- matrices ---------------------------------------------------------------


def test_validate_cycle4():
    d = validate_matrix(MATRICES / "cycle4.json")
    assert d.n == 4 and d.source == "cycles"
    assert [[int(x) for x in row] for row in d.entries] == [
        [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0]]


def test_validate_bad_entry_has_position(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{\n  "n": 2,\n  "entries": [\n    ["0", "1"],\n    ["1/0", "0"]\n  ]\n}\n')
    with pytest.raises(ParseError) as info:
        validate_matrix(f)
    assert (info.value.line, info.value.column) == (5, 6)


def test_validate_bad_json_has_position(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"n": 2,\n "entries": [[0, 1], [1 0]]}')
    with pytest.raises(ParseError) as info:
        validate_matrix(f)
    assert info.value.line == 2


def test_validate_not_square(tmp_path):
    f = tmp_path / "wide.json"
    f.write_text(json.dumps({"n": 3, "entries": [[0] * 4 for _ in range(3)]}))
    with pytest.raises(NotSquare):
        validate_matrix(f)


# --- configuration -------------------------------------------------------------


@pytest.mark.parametrize("kwargs, error", [
    (dict(command="cohomology", algebra="as_nd", n=4), InputError),
    (dict(command="cohomology", algebra="as_n", n=4, cycles=(1, 4)), InputError),
    (dict(command="hopf-check", algebra="ahp", n=2), InputError),
    (dict(command="cohomology", algebra="as_n"), InputError),
    (dict(command="cohomology", algebra="as_n", n=4, degree=1), WindowTooSmall),
    (dict(command="cohomology", algebra="as_n", n=4, threads=0), InputError),
])
def test_config_validation(kwargs, error):
    with pytest.raises(error):
        JobConfig(**kwargs).validate()


# --- exit codes -----------------------------------------------------------------


def test_certify_as4(capsys):
    code, rep = report(capsys, "certify-h2", "--algebra", "as_n", "--n", "4")
    assert code == 0
    assert rep["conclusion"] == "verified" and rep["command"] == "certify-h2"


def test_cohomology_cycle_matrix(capsys):
    code, rep = report(capsys, "cohomology", "--algebra", "as_nd", "--n", "4",
                       "--matrix", str(MATRICES / "cycle4.json"), "--degree", "3")
    assert code == 0 and (rep["h0"], rep["h1"]) == (1, 0) and rep["stable"]


def test_hopf_check_ahp(capsys):
    code, rep = report(capsys, "hopf-check", "--algebra", "ahp", "--n", "2", "--p", "2", "--degree", "4")
    assert code == 0 and rep["status"] == "pass"


def test_complete_and_roundtrip(capsys):
    code, rep = report(capsys, "complete", "--n", "3", "--degree", "4")
    assert code == 0 and rep["local_confluence"] == "pass" and rep["normal_words"][0] == 1
    code, rep = report(capsys, "primitive-roundtrip", "--algebra", "as_nd", "--cycles", "1,4")
    assert code == 0 and rep["automorphisms"] == 3
    assert all(case["status"] == "pass" for case in rep["cases"])


def test_window_too_small(capsys):
    code, rep = report(capsys, "cohomology", "--n", "4", "--degree", "1")
    assert code == 3 and rep["error"] == "WindowTooSmall"
    code, rep = report(capsys, "complete", "--algebra", "as_nd", "--cycles", "1,4", "--degree", "2")
    assert code == 0
    code, rep = report(capsys, "complete", "--algebra", "ahp", "--n", "2", "--p", "3", "--degree", "2")
    assert code == 3 and rep["error"] == "InsufficientCompletion"


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "n": 1,\n  "entries": [["1/0"]]\n}\n')
    code, rep = report(capsys, "cohomology", "--algebra", "as_nd", "--matrix", str(bad))
    assert code == 4 and rep["error"] == "ParseError" and rep["line"] == 3
    code, rep = report(capsys, "cohomology", "--algebra", "as_nd", "--n", "5",
                       "--matrix", str(MATRICES / "cycle4.json"))
    assert code == 4 and rep["error"] == "DimensionMismatch"
    code, rep = report(capsys, "certify-h2", "--algebra", "ahp", "--n", "2", "--p", "2")
    assert code == 4
    code, rep = report(capsys, "cohomology", "--algebra", "as_nd", "--matrix", str(tmp_path / "missing.json"))
    assert code == 4
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 4


def test_failed_check_exit_code(capsys, monkeypatch):
    import qpermcoh.cli as cli
    from qpermcoh import certify_h2_vanishing

    def with_false_relator(P, D, strict=False):
        return certify_h2_vanishing(P, D, strict=strict, check_relators=["u[1,1]*u[2,2]"])

    monkeypatch.setattr(cli, "certify_h2_vanishing", with_false_relator)
    code, rep = report(capsys, "certify-h2", "--n", "4")
    assert code == 2 and rep["conclusion"] == "failed"
    assert any(r["verdict"] != "pass" for r in rep["rho_relations"])


# --- output ------------------------------------------------------------------------


def test_reports_are_byte_deterministic(capsys):
    argv = ("certify-h2", "--algebra", "as_nd", "--cycles", "1,4")
    _, first = invoke(capsys, *argv)
    _, second = invoke(capsys, *argv)
    assert first == second


def test_reports_do_not_depend_on_hash_seed():
    import os
    outputs = set()
    for seed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run([sys.executable, "-m", "qpermcoh.cli", "certify-h2", "--algebra", "as_nd",
                               "--cycles", "1,4"], capture_output=True, env=env, check=False)
        assert proc.returncode == 0
        outputs.add(proc.stdout)
    assert len(outputs) == 1


def test_threads_fallback(capsys, monkeypatch):
    monkeypatch.setenv("HHL_THREADS", "3")
    _, rep = report(capsys, "cohomology", "--n", "3")
    assert rep["threads"] == 3
    _, rep = report(capsys, "cohomology", "--n", "3", "--threads", "2")
    assert rep["threads"] == 2
    monkeypatch.setenv("HHL_THREADS", "many")
    assert main(["cohomology", "--n", "3"]) == 4


def test_output_file_and_markdown(capsys, tmp_path):
    target = tmp_path / "cert.md"
    code = main(["certify-h2", "--n", "4", "--format", "markdown", "--output", str(target)])
    assert code == 0 and capsys.readouterr().out == ""
    text = target.read_text()
    assert text.startswith("#") and "verified" in text


def test_run_accepts_config(tmp_path):
    import io
    buf = io.StringIO()
    assert run(JobConfig("cohomology", "as_n", n=4), buf) == 0
    assert json.loads(buf.getvalue())["h1"] == 0


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "qpermcoh.cli", "hopf-check", "--n", "4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["status"] == "pass"
