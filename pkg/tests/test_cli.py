import json
import subprocess
import sys

import pytest

from coulomb_edge.cli import main


def test_scaling_prints_json(capsys):
    assert main(["scaling", "--potential", "quartic", "--n", "1000"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["regime"] == "GeneralCase"
    assert out["t0"] == pytest.approx(1.0)


def test_subcritical_is_validation_failure(capsys):
    assert main(["scaling", "--n", "100"]) == 2
    assert "n >= " in capsys.readouterr().err


def test_assumption_failure_exit_code():
    assert main(["scaling", "--potential", "custom:poly=1@3", "--n", "1000"]) == 2


def test_numeric_failure_exit_code():
    # 2 c R^2 / (1 + R^2) never reaches beta = 5 when c = 2
    assert main(["equilibrium", "--potential", "logconfining:c=2", "--beta", "5"]) == 3


def test_equilibrium_csv(tmp_path):
    path = tmp_path / "eq.csv"
    assert main(["equilibrium", "--points", "5", "--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "r,density,cdf" and len(lines) == 6
    assert lines[-1].endswith(",1")


def test_sample_csv(tmp_path):
    path = tmp_path / "s.csv"
    assert main(["sample", "--n", "4", "--replicas", "3", "--seed", "9", "--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "replica_id,rank,modulus" and len(lines) == 13


def test_exact_cdf(capsys):
    assert main(["exact-cdf", "--potential", "hardwall", "--n", "2", "--t-grid", "2"]) == 0
    assert capsys.readouterr().out == "t,cdf\n2,0.703125\n"


def test_edge_writes_files(tmp_path):
    out, rep = tmp_path / "e.csv", tmp_path / "e.json"
    code = main(["edge", "--n", "200", "--replicas", "60", "--out", str(out), "--report", str(rep)])
    assert code == 0
    assert json.loads(rep.read_text())["m"] == 60
    assert len(out.read_text().splitlines()) == 61


def test_heavy_tail_and_bulk(capsys):
    assert main(["heavy-tail", "--n", "50", "--replicas", "60", "--t-grid", "1.5,2"]) == 0
    assert len(json.loads(capsys.readouterr().out)["t_grid"]) == 2
    assert main(["bulk", "--n", "200"]) == 0
    assert json.loads(capsys.readouterr().out)["sup_distance"] < 0.2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "coulomb_edge", "scaling", "--n", "1000"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["regime"] == "PowerCase"
