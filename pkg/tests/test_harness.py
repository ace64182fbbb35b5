import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from coulomb_edge.errors import AssumptionViolated, EmptySample, ParameterError, SubcriticalN
from coulomb_edge.harness import (
    ExperimentConfig,
    Law,
    default_threads,
    emit_csv,
    emit_json,
    emit_quantiles_csv,
    format_real,
    kolmogorov_sf,
    ks_statistic,
    render_csv,
    render_json,
    replica_maxima,
    run_bulk_experiment,
    run_edge_experiment,
)
from coulomb_edge.numerics import RngStream
from coulomb_edge.potential import Power

uniform = lambda x: np.clip(x, 0.0, 1.0)


@pytest.mark.parametrize("lam", [0.05, 0.3, 0.7, 0.99, 1.0, 1.36, 1.95, 3.0, 6.0])
def test_kolmogorov_sf_matches_scipy(lam):
    assert kolmogorov_sf(lam) == pytest.approx(stats.kstwobign.sf(lam), abs=1e-12)


def test_single_point():
    D, _ = ks_statistic(np.array([0.5]), uniform)
    assert D == 0.5


def test_equioscillating_sample():
    m = 100
    D, _ = ks_statistic((np.arange(1, m + 1) - 0.5) / m, uniform)
    assert D == pytest.approx(0.005, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=200))
def test_statistic_matches_scipy(xs):
    xs = np.sort(np.array(xs))
    D, _ = ks_statistic(xs, uniform)
    assert D == pytest.approx(stats.kstest(xs, "uniform").statistic, abs=1e-14)


def test_uniform_calibration():
    # p >= 0.001 should fail about 1 time in 1000; allow 2 misses in 200 runs
    misses = sum(
        ks_statistic(np.sort(RngStream(99, i).uniform(10_000)), uniform)[1] < 1e-3 for i in range(200)
    )
    assert misses <= 2


def test_ks_input_checks():
    with pytest.raises(EmptySample):
        ks_statistic(np.array([]), uniform)
    with pytest.raises(ParameterError):
        ks_statistic(np.array([0.5, 0.2]), uniform)


def test_threads_env(monkeypatch):
    monkeypatch.setenv("COULOMB_EDGE_THREADS", "6")
    assert default_threads() == 6
    monkeypatch.setenv("COULOMB_EDGE_THREADS", "junk")
    assert default_threads() == 1


def test_replica_maxima_thread_invariant():
    a = replica_maxima(Power(2), 200, 5, 64, threads=1)
    b = replica_maxima(Power(2), 200, 5, 64, threads=8)
    np.testing.assert_array_equal(a, b)


def test_exact_experiment_small():
    res = run_edge_experiment(ExperimentConfig("power:alpha=2", 300, 400, 3, Law.EXACT))
    rep = res.report
    assert rep.m == 400 and rep.statistic == "a_n (max - b_n)"
    assert rep.p_value > 1e-3
    assert len(rep.quantiles) == 9
    for q in rep.quantiles:
        assert abs(q["empirical"] - q["reference"]) < 0.5


def test_exact_experiment_without_scaling():
    res = run_edge_experiment(ExperimentConfig("power:alpha=2", 50, 300, 4, Law.EXACT))
    assert res.report.scaling is None and res.report.statistic == "max"
    assert res.report.p_value > 1e-3


def test_gumbel_needs_admissible_n():
    with pytest.raises(SubcriticalN):
        run_edge_experiment(ExperimentConfig("power:alpha=2", 100, 100, 0, Law.GUMBEL))


def test_gumbel_refuses_unverified_potential():
    with pytest.raises(AssumptionViolated):
        run_edge_experiment(ExperimentConfig("custom:poly=1@3", 500, 100, 0, Law.GUMBEL))


def test_too_few_replicas():
    with pytest.raises(ParameterError):
        run_edge_experiment(ExperimentConfig("power:alpha=2", 300, 10))


def test_heavy_tail_only_for_hard_wall():
    with pytest.raises(ParameterError):
        run_edge_experiment(ExperimentConfig("power:alpha=2", 300, 100, law=Law.HEAVY_TAIL))


def test_heavy_tail_report_rows():
    rep = run_edge_experiment(ExperimentConfig("hardwall", 100, 500, 1, Law.HEAVY_TAIL)).report
    assert [row["t"] for row in rep.t_grid] == [1.5, 2.0, 3.0]
    for row in rep.t_grid:
        assert abs(row["z"]) < 4
    assert any("formal" in note for note in rep.notes)


def test_failed_run_writes_nothing(tmp_path):
    out, report = tmp_path / "o.csv", tmp_path / "r.json"
    with pytest.raises(SubcriticalN):
        run_edge_experiment(ExperimentConfig("power:alpha=2", 100, 100, 0, Law.GUMBEL, out=str(out), report=str(report)))
    assert not out.exists() and not report.exists()


def test_bulk_small_n_smoke(tmp_path):
    path = tmp_path / "bulk.json"
    rep = run_bulk_experiment(ExperimentConfig("power:alpha=2", 10, 1, report=str(path)))
    assert 0 < rep.sup_distance <= 1
    assert json.loads(path.read_text())["n"] == 10


# --- emission ---

def test_format_real_round_trips():
    for x in (0.1, 1 / 3, math.pi * 1e-300, 2.0**60, -7.25e12):
        assert float(format_real(x)) == x


def test_header_only_csv(tmp_path):
    path = tmp_path / "q.csv"
    emit_csv(path, ("prob", "empirical", "reference"), [])
    assert path.read_text() == "prob,empirical,reference\n"


def test_quantile_csv(tmp_path):
    rep = run_edge_experiment(ExperimentConfig("power:alpha=2", 300, 100, 2)).report
    path = tmp_path / "q.csv"
    emit_quantiles_csv(rep, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "prob,empirical,reference" and len(lines) == 10


def test_json_round_trip(tmp_path):
    rep = run_edge_experiment(ExperimentConfig("power:alpha=2", 300, 100, 2)).report
    path = tmp_path / "r.json"
    emit_json(rep, path)
    back = json.loads(path.read_text())
    assert back["D"] == rep.D and back["p_value"] == rep.p_value
    assert back["scaling"]["a_n"] == rep.scaling["a_n"]
    assert back["quantiles"][4]["empirical"] == rep.quantiles[4]["empirical"]


def test_json_nonfinite_is_null():
    assert json.loads(render_json({"x": math.nan, "y": [math.inf, 1.5]})) == {"x": None, "y": [None, 1.5]}


def test_csv_cells():
    text = render_csv(("a", "b", "c"), [(1, 0.1, True)])
    assert text == "a,b,c\n1,0.10000000000000001,true\n"


@pytest.mark.slow
def test_gumbel_distance_shrinks_with_n():
    # logarithmic convergence: visible between n = 200 and n = 1e5 on the same m
    D = {
        n: run_edge_experiment(ExperimentConfig("power:alpha=2", n, 1000, 3, Law.GUMBEL, threads=4)).report.D
        for n in (200, 100_000)
    }
    assert D[100_000] < D[200]
