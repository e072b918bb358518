import json
import shutil
import subprocess
import sys

import pytest

from oclab.arith import INF
from oclab.cli import run
from oclab.report import from_json, report_to_dict, to_csv, to_json
from oclab.verify import Row, VerificationReport, verify_theorem_a


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_thm_a_json_golden(capsys):
    code, out, _ = _run(capsys, "thm-a", "--p", "2", "--k", "12", "--terms", "30", "--format", "json")
    assert code == 0
    d = json.loads(out)
    row30 = next(r for r in d["rows"] if r["i"] == 30)
    assert row30["observed"] == "105" and row30["required"] == "100"
    assert d["params"]["N"] == 31


def test_thm_a_csv_golden_row(capsys):
    code, out, _ = _run(capsys, "thm-a", "--p", "2", "--k", "12", "--terms", "30", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "claim_id,p,k,i,observed,required,margin,status"
    assert "THM_A,2,12,2,7,20/3,1/3,pass" in lines


def test_star_refused_for_p5(capsys):
    code, _, err = _run(capsys, "umatrix", "--p", "5", "--imax", "4", "--check", "star")
    assert code == 2
    assert "c_(4,1) = 24" in err


def test_identities(capsys):
    assert _run(capsys, "identities", "--p", "2")[0] == 0


@pytest.mark.parametrize("argv", [
    ["thm-a", "--p", "2"],
    ["thm-a", "--p", "2", "--k", "7"],
    ["thm-a", "--p", "5", "--k", "6"],
    ["thm-a", "--p", "2", "--k", "12", "--terms", "30", "--N", "10"],
    ["nonsense"],
    ["katz", "--p", "3", "--k", "4"],
])
def test_usage_and_parameter_errors(capsys, argv):
    code, _, err = _run(capsys, *argv)
    assert code == 2 and err


def test_unwritable_output(capsys, tmp_path):
    target = tmp_path / "missing" / "out.json"
    code, _, err = _run(capsys, "identities", "--p", "2", "--format", "json", "--out", str(target))
    assert code == 2 and "I/O" in err


def test_out_file_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["special", "--p", "3", "--k", "10", "--terms", "12", "--format", "csv"]
    assert run(argv + ["--out", str(a)]) == 0
    assert run(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    code, out, _ = _run(capsys, *argv)
    assert out.encode() == a.read_bytes()


@pytest.mark.parametrize("fmt", ["json", "csv", "text"])
def test_expand_formats(capsys, fmt):
    code, out, _ = _run(capsys, "expand", "--p", "2", "--k", "12", "--terms", "30", "--format", fmt)
    assert code == 0 and "105" in out


def test_sweep_and_katz(capsys):
    code, out, _ = _run(capsys, "sweep", "--claim", "thm-a", "--p", "2", "3", "--k", "4", "6",
                        "--terms", "8", "--format", "json")
    assert code == 0 and len(json.loads(out)) == 4
    code, out, _ = _run(capsys, "katz", "--p", "5", "--k", "4", "--imax", "8", "--format", "json")
    assert code == 0 and json.loads(out)["params"]["method"] == "katz"


def test_failing_report_exits_1(capsys, monkeypatch):
    import oclab.cli as cli
    bad = VerificationReport("THM_A", {"p": 2, "k": 12}, "fail", [Row(1, 1, 2, -1)], {})
    monkeypatch.setattr(cli, "verify_theorem_a", lambda *a: bad)
    code, out, _ = _run(capsys, "thm-a", "--p", "2", "--k", "12", "--format", "csv")
    assert code == 1 and out.strip().endswith("fail")


def test_consistency_error_exits_3(capsys, monkeypatch):
    import oclab.cli as cli
    from oclab.umatrix import ConsistencyError

    def boom(*a):
        raise ConsistencyError("c_(1,1) = 1/2 is not an integer")
    monkeypatch.setattr(cli, "verify_umatrix", boom)
    assert _run(capsys, "umatrix", "--p", "2")[0] == 3


def test_json_round_trip():
    rep = verify_theorem_a(3, 6, 12)
    assert from_json(to_json(rep)) == rep
    assert from_json(to_json([rep, rep])) == [rep, rep]


def test_empty_rows_and_inf():
    empty = VerificationReport("THM_A", {"p": 2, "k": 4}, "pass", [], {})
    assert json.loads(to_json(empty))["rows"] == []
    rep = VerificationReport("THM_A", {"p": 2, "k": 4}, "pass", [Row(2, INF, 8, INF)], {})
    assert report_to_dict(rep)["rows"][0]["observed"] == "inf"
    assert to_csv(rep).splitlines()[1] == "THM_A,2,4,2,inf,8,inf,pass"
    assert from_json(to_json(rep)) == rep


@pytest.mark.skipif(shutil.which("oclab") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["oclab", "identities", "--p", "3", "--format", "csv"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("claim_id,")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "oclab.cli", "umatrix", "--p", "7", "--check", "star"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
