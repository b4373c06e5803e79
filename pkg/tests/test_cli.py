import json
from pathlib import Path

import pytest

from kpzlab import cli

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv,golden", [
    (("exact", "hammersley", "--lambda", "1.0", "--lmax", "8"), "exact_hammersley_lambda1.csv"),
    (("exact", "symmetrized", "--z", "1", "--alpha", "0.5", "--symmetry", "diag", "--lmax", "4"), "exact_diag.csv"),
    (("tw", "table", "--smin", "-2", "--smax", "2", "--step", "0.5"), "tw_table.csv"),
    (("sim", "hammersley", "--lambda", "1", "--trials", "20", "--seed", "7"), "sim_hammersley_seed7.csv"),
])
def test_golden(capsys, argv, golden):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_exact_hammersley_row(capsys):
    _, out, _ = run(capsys, "exact", "hammersley", "--lambda", "1.0", "--lmax", "8")
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert float(rows[1][5]) == pytest.approx(0.8386125671, abs=1e-6)


def test_tw_table_right_tail(capsys):
    _, out, _ = run(capsys, "tw", "table", "--smin", "-6", "--smax", "4", "--step", "0.1")
    lines = out.splitlines()
    assert lines[0] == "s,f_gue,f_goe,f_gse"
    assert len(lines) == 102
    assert float(lines[-1].split(",")[1]) >= 1 - 1e-4


def test_sim_deterministic(capsys, tmp_path):
    argv = ["sim", "hammersley", "--lambda", "1", "--trials", "1000", "--seed", "7"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    out = tmp_path / "w.csv"
    assert cli.main(argv + ["--workers", "2", "--out", str(out)]) == 0
    assert out.read_text() == first


@pytest.mark.parametrize("kind,extra", [
    ("png", ["--T", "4"]),
    ("boundary", ["--t", "0.5", "--alpha-plus", "0.4", "--alpha-minus", "0.3", "--with-origin"]),
    ("johansson", ["--a", "0.5,0.5,0.5", "--b", "0.5,0.5,0.5"]),
])
def test_sim_kinds(capsys, kind, extra):
    code, out, _ = run(capsys, "sim", kind, "--trials", "50", "--seed", "3", "--summary", *extra)
    assert code == 0
    assert out.splitlines()[0] == "l,empirical_cdf,stderr"


def test_exact_boundary(capsys):
    code, out, _ = run(capsys, "exact", "boundary", "--t", "0.5", "--alpha-plus", "0.4", "--alpha-minus", "0.3",
                       "--lmax", "3")
    assert code == 0
    assert out.splitlines()[0] == "param,alpha,beta,symmetry,l,cdf"
    assert len(out.splitlines()) == 5


def test_kpz_outputs(capsys, tmp_path):
    mom = tmp_path / "m.json"
    code, out, _ = run(capsys, "kpz", "baik-rains", "--y", "0.5", "--step", "1", "--moments", str(mom))
    assert code == 0
    assert out.splitlines()[0] == "y,s,f_tilde,f_shifted"
    assert len(out.splitlines()) == 22
    m = json.loads(mom.read_text())
    assert abs(m["mean_shifted"]) < 1e-3
    code, out, _ = run(capsys, "kpz", "baik-rains", "--y", "0.5", "--format", "json")
    assert json.loads(out) == m


@pytest.mark.parametrize("argv", [
    ("exact", "hammersley", "--lambda", "1"),
    ("frobnicate",),
    ("sim", "hammersley", "--lambda", "1", "--trials", "10", "--seed", "1", "--bogus"),
    ("sim", "johansson", "--a", "x", "--b", "1", "--trials", "1", "--seed", "1"),
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "usage" in err


@pytest.mark.parametrize("argv", [
    ("exact", "hammersley", "--lambda", "-1", "--lmax", "3"),
    ("exact", "boundary", "--t", "1", "--alpha-plus", "2", "--alpha-minus", "0.6", "--lmax", "3"),
    ("kpz", "baik-rains", "--y", "3"),
    ("tw", "table", "--smin", "-20"),
    ("--precision-bits", "20", "exact", "hammersley", "--lambda", "1", "--lmax", "2"),
])
def test_validation_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "invalid input" in err


def test_accuracy_error_exit(capsys, monkeypatch):
    from kpzlab.errors import AccuracyError

    def boom(*a, **k):
        raise AccuracyError("forced")
    monkeypatch.setattr(cli, "tw_table", boom)
    code, _, err = run(capsys, "tw", "table")
    assert code == 3
    assert "accuracy" in err


def test_precision_flag(capsys, monkeypatch):
    from kpzlab.specfun import PRECISION_ENV
    monkeypatch.delenv(PRECISION_ENV, raising=False)
    code, out, _ = run(capsys, "--precision-bits", "256", "exact", "hammersley", "--lambda", "1", "--lmax", "2")
    assert code == 0
    assert out == "\n".join((GOLDEN / "exact_hammersley_lambda1.csv").read_text().splitlines()[:4]) + "\n"


def test_verify_quick(capsys, tmp_path):
    out = tmp_path / "report.json"
    assert cli.main(["verify", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["passed"] and report["failed"] == []


def test_verify_fault_names_check(capsys):
    code, out, err = run(capsys, "verify", "--fault", "r1_sign")
    assert code == 3
    assert json.loads(out)["failed"] == ["opuc_dual_route"]
    assert "opuc_dual_route" in err
