import subprocess
import sys

import pytest

from cwlocate import cli
from cwlocate.engine import InvariantViolation
from cwlocate.expr import evaluate, parse_classic, parse_slick

from conftest import FIXTURES

SEVEN = str(FIXTURES / "seven.slick")
K2 = str(FIXTURES / "k2.slick")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_diag_seven(capsys):
    code, out, err = run(capsys, "diag", "--input", SEVEN, "--c", "0")
    lines = out.splitlines()
    assert code == 0
    assert lines[:7] == ["-2", "2", "-1/2", "-3/2", "2/3", "1/2", "0"]
    assert lines[7] == "inertia: n+=3 n0=1 n-=3"
    assert err == ""


def test_diag_k2_shifted(capsys):
    code, out, _ = run(capsys, "diag", "--input", K2, "--c", "2")
    assert code == 0 and out.splitlines()[-1] == "inertia: n+=0 n0=0 n-=2"


def test_diag_laplacian(capsys):
    code, out, _ = run(capsys, "diag", "--input", SEVEN, "--spec", "laplacian")
    assert code == 0 and "n-=0" in out and "n0=1" in out


def test_diag_trace_to_stderr(capsys):
    code, out, err = run(capsys, "diag", "--input", SEVEN, "--trace", "--backend", "python")
    assert code == 0
    assert "node=12 kp=0 kpp=2 emit=[-2,2,-1/2]" in err.splitlines()
    assert "node=" not in out


def test_diag_custom(tmp_path, capsys):
    diag = tmp_path / "d.txt"
    diag.write_text("# vertex value\na 1\nb -1/2\n")
    code, out, _ = run(capsys, "diag", "--input", K2, "--spec", "custom", "--w", "3",
                       "--diagonal", str(diag))
    assert code == 0 and out.splitlines()[-1] == "inertia: n+=1 n0=0 n-=1"
    code, _, err = run(capsys, "diag", "--input", K2, "--spec", "custom")
    assert code == 1 and "--diagonal" in err


@pytest.mark.parametrize("interval, count", [("(0,1)", 2), ("[0,0]", 1), ("(-inf,inf)", 7)])
def test_count(capsys, interval, count):
    code, out, _ = run(capsys, "count", "--input", SEVEN, "--interval", interval)
    assert code == 0 and out == f"count: {count}\n"


def test_count_complements_sum_to_n(capsys):
    _, a, _ = run(capsys, "count", "--input", SEVEN, "--interval", "(-inf,1/3)")
    _, b, _ = run(capsys, "count", "--input", SEVEN, "--interval", "[1/3,inf)")
    assert int(a.split()[1]) + int(b.split()[1]) == 7


def test_translate_both_ways(tmp_path, capsys):
    code, out, _ = run(capsys, "translate", "--input", SEVEN)
    assert code == 0 and out.startswith("k 4")
    classic = parse_classic(out)
    assert evaluate(classic) == evaluate(parse_slick((FIXTURES / "seven.slick").read_text()))
    path = tmp_path / "p4.cw"
    path.write_text(out)
    code, out, _ = run(capsys, "translate", "--input", str(path), "--format", "classic", "--indent", "0")
    assert code == 0 and out.startswith("k 4") and len(out.splitlines()) == 2
    assert evaluate(parse_slick(out)) == evaluate(classic)


def test_translate_atom(tmp_path, capsys):
    path = tmp_path / "atom.slick"
    path.write_text("k 1 (v 1 x)")
    code, out, _ = run(capsys, "translate", "--input", str(path))
    assert out.split() == ["k", "2", "(v", "1", "x)"]


def test_check_single(capsys):
    code, out, _ = run(capsys, "check", "--input", SEVEN)
    assert code == 0
    assert out.splitlines() == ["engine: n+=3 n0=1 n-=3", "oracle: n+=3 n0=1 n-=3", "MATCH"]


def test_check_fuzz(capsys):
    code, out, _ = run(capsys, "check", "--fuzz", "25", "--max-n", "8", "--max-k", "3")
    assert code == 0 and out == "25/25 MATCH\n"


def test_check_mismatch_exit(monkeypatch, capsys):
    monkeypatch.setattr(cli, "_compare", lambda e, c, spec, args: ((1, 0, 0), (0, 0, 1), True))
    code, out, _ = run(capsys, "check", "--input", K2)
    assert code == 3 and "MISMATCH" in out


def test_invariant_violation_exit(monkeypatch, capsys):
    def broken(*args, **kwargs):
        raise InvariantViolation(5, "asymmetric entries (0,1)")
    monkeypatch.setattr(cli, "diagonalize", broken)
    code, _, err = run(capsys, "check", "--input", K2)
    assert code == 2 and "node=5" in err
    code, _, err = run(capsys, "diag", "--input", K2)
    assert code == 2


def test_check_oracle_cap(capsys):
    code, _, err = run(capsys, "check", "--input", SEVEN, "--max-oracle-n", "5")
    assert code == 1 and "capped" in err


def test_gen(capsys):
    code, out, _ = run(capsys, "gen", "--n", "1", "--k", "1", "--seed", "0")
    assert code == 0 and out == "k 1\n(v 1 v1)\n"
    _, a, _ = run(capsys, "gen", "--n", "12", "--k", "4", "--seed", "7")
    _, b, _ = run(capsys, "gen", "--n", "12", "--k", "4", "--seed", "7")
    assert a == b and len(evaluate(parse_slick(a))) == 12
    code, _, _ = run(capsys, "gen", "--n", "0", "--k", "1")
    assert code == 1


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--sizes", "200", "400", "--k", "2")
    lines = out.splitlines()
    assert code == 0 and lines[0].split()[:5] == ["backend", "k", "n", "seconds", "ops"]
    assert len(lines) >= 3


@pytest.mark.parametrize("argv", [
    ["diag"], ["count", "--input", SEVEN], ["nope"], ["diag", "--input", SEVEN, "--c", "x"],
])
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == 1


def test_parse_error_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.slick"
    bad.write_text("k 2\n(v 3 a)")
    code, _, err = run(capsys, "diag", "--input", str(bad))
    assert code == 1 and "line 2, col 4" in err
    code, _, err = run(capsys, "count", "--input", SEVEN, "--interval", "(1,0)")
    assert code == 1
    code, _, _ = run(capsys, "diag", "--input", str(tmp_path / "missing"))
    assert code == 1


def test_stdin_and_module_entry():
    text = (FIXTURES / "k2.slick").read_text()
    res = subprocess.run([sys.executable, "-m", "cwlocate.cli", "diag", "--input", "-"],
                         input=text, capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.splitlines()[-1] == "inertia: n+=1 n0=0 n-=1"
