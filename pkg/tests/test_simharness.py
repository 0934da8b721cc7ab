import math
import statistics

import pytest

from leomr.constellation import ConstellationConfig
from leomr.routing import Route
from leomr.constellation import SatelliteId
from leomr.simharness import (
    ExperimentConfig,
    ExperimentReport,
    contention_experiment,
    map_allocation_experiment,
    reduce_placement_experiment,
    reduction_factor_sweep,
    routing_experiment,
    run_context,
    visit_stats,
)

SMALL = dict(shell_sweep=((100, 50),), runs=3, route_pairs=60)


@pytest.fixture(scope="module")
def small_cfg():
    return ExperimentConfig(**SMALL)


def test_same_seed_same_report(small_cfg):
    a = map_allocation_experiment(small_cfg)
    b = map_allocation_experiment(small_cfg)
    assert a.to_csv() == b.to_csv()


def test_different_seed_differs(small_cfg):
    other = ExperimentConfig(**SMALL, base_seed=100)
    assert routing_experiment(small_cfg).to_csv() != routing_experiment(other).to_csv()


def test_run_context_is_seeded(small_cfg):
    config = small_cfg.shell(100, 50, 87.0)
    a, b = run_context(small_cfg, config, 1), run_context(small_cfg, config, 1)
    assert (a.sim_time, a.job.station, a.collectors) == (b.sim_time, b.job.station, b.collectors)
    assert 0.0 <= a.sim_time < config.period
    assert a.job.station.population > 1_000_000


def test_csv_round_trip(small_cfg):
    report = reduce_placement_experiment(small_cfg)
    again = ExperimentReport.from_csv(report.to_csv())
    assert again.rows == report.rows


def test_json_round_trip(small_cfg):
    report = routing_experiment(small_cfg)
    again = ExperimentReport.from_json(report.to_json())
    assert again.rows == report.rows and again.raw == report.raw


def test_summary_statistics_recompute(small_cfg):
    report = map_allocation_experiment(small_cfg)
    for row in report.rows:
        values = report.values(row)
        assert row.runs == len(values) == 3
        assert row.mean == pytest.approx(statistics.fmean(values))
        assert row.std == pytest.approx(statistics.stdev(values))


def test_single_run_std_is_zero():
    report = routing_experiment(ExperimentConfig(shell_sweep=((50, 20),), runs=1, route_pairs=10))
    assert all(row.std == 0.0 and row.runs == 1 for row in report.rows)


def test_routing_report_shape():
    report = routing_experiment(ExperimentConfig(shell_sweep=((50, 20),), runs=2, route_pairs=40))
    assert {r.inclination_deg for r in report.rows} == {53.0, 87.0}
    assert report.get("hop_delta_max", inclination_deg=87.0).mean == 0.0
    assert report.get("dominance_violations", inclination_deg=53.0).mean == 0.0


def test_fr_sweep_has_one_row_set_per_factor(small_cfg):
    report = reduction_factor_sweep(small_cfg, factors=(1, 5, 50))
    params = {r.param for r in report.rows}
    assert params == {"F_R=1", "F_R=5", "F_R=50"}


def test_fr_sweep_rejects_factors_below_one(small_cfg):
    with pytest.raises(ValueError):
        reduction_factor_sweep(small_cfg, factors=(0.5,))


def test_parallel_matches_serial():
    serial = ExperimentConfig(**SMALL)
    parallel = ExperimentConfig(**SMALL, workers=2)
    assert contention_experiment(serial).to_csv() == contention_experiment(parallel).to_csv()


def test_runs_must_be_positive():
    with pytest.raises(ValueError):
        ExperimentConfig(runs=0)


def test_visit_stats_small_case():
    a, b, c = SatelliteId(0, 0), SatelliteId(1, 0), SatelliteId(2, 0)
    routes = [Route((a, b, c), (1.0, 1.0)), Route((b, c), (1.0,))]
    stats = visit_stats(routes)
    assert stats["max"] == 2.0
    assert stats["mean"] == pytest.approx(5 / 3)
    assert stats["relay_max"] == 1.0
    # Gini of (1, 2, 2)
    assert stats["gini"] == pytest.approx(2 / 15)


def test_visit_stats_empty():
    assert visit_stats([])["max"] == 0.0
