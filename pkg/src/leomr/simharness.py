"""
Seeded experiment drivers.

Every experiment iterates over shells (planes x slots) and inclinations
and repeats ``runs`` independent runs.  Run ``r`` draws all of its
randomness (simulation time, ground station, node sampling) from seed
``base_seed + r``, so runs can execute in any order or in parallel and
still give identical reports.

Report CSV columns::

    experiment,planes,sats_per_plane,inclination_deg,param,metric,mean,std,runs

``std`` is the unbiased (n-1) estimate, 0 for a single run.  The JSON
form adds the raw per-run values.
"""
from __future__ import annotations

import csv
import io
import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .constellation import ConstellationConfig, SatelliteId
from .geo import GroundStation, load_ground_stations
from .linkmodel import LinkParams
from .routing import Route, baseline_route, contention_counts, optimized_route
from .scheduler import (
    JobSpec,
    assign_bipartite,
    assign_eager,
    assign_random,
    build_cost_matrix,
    place_reducer_center,
    plan_reduce,
    prepare_job,
)

DEFAULT_SHELLS = ((50, 20), (50, 40), (100, 50), (100, 100))
DEFAULT_FR_FACTORS = (1, 2, 5, 10, 20, 50, 100)
CSV_COLUMNS = [
    "experiment",
    "planes",
    "sats_per_plane",
    "inclination_deg",
    "param",
    "metric",
    "mean",
    "std",
    "runs",
]


@dataclass(frozen=True)
class ExperimentConfig:
    shell_sweep: tuple[tuple[int, int], ...] = DEFAULT_SHELLS
    inclinations: tuple[float, ...] = (87.0,)
    routing_inclinations: tuple[float, ...] = (53.0, 87.0)
    altitude_km: float = 530.0
    phase_offset: int = 0
    runs: int = 20
    base_seed: int = 0
    job_template: JobSpec = field(default_factory=JobSpec)
    link: LinkParams = field(default_factory=LinkParams)
    stations: tuple[GroundStation, ...] = ()
    route_pairs: int = 1000
    fr_factors: tuple[float, ...] = DEFAULT_FR_FACTORS
    workers: int = 1

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if not self.stations:
            object.__setattr__(self, "stations", tuple(load_ground_stations(min_population=1_000_000)))

    def shell(self, planes: int, slots: int, inclination: float) -> ConstellationConfig:
        return ConstellationConfig(
            planes, slots, self.altitude_km, inclination, phase_offset=self.phase_offset
        )

    def grid(self, inclinations=None):
        for planes, slots in self.shell_sweep:
            for inc in inclinations or self.inclinations:
                yield self.shell(planes, slots, inc)


@dataclass(frozen=True)
class ReportRow:
    experiment: str
    planes: int
    sats_per_plane: int
    inclination_deg: float
    param: str
    metric: str
    mean: float
    std: float
    runs: int


@dataclass
class ExperimentReport:
    experiment: str
    rows: list[ReportRow] = field(default_factory=list)
    raw: dict[str, list[float]] = field(default_factory=dict)

    def add(self, config: ConstellationConfig, metric: str, values, param: str = ""):
        values = [float(v) for v in values]
        n = len(values)
        mean = statistics.fmean(values) if n else math.nan
        std = statistics.stdev(values) if n > 1 else 0.0
        self.rows.append(
            ReportRow(
                self.experiment,
                config.num_planes,
                config.sats_per_plane,
                float(config.inclination_deg),
                param,
                metric,
                mean,
                std,
                n,
            )
        )
        key = _key(config.num_planes, config.sats_per_plane, config.inclination_deg, param, metric)
        self.raw[key] = values

    def get(self, metric: str, planes=None, sats_per_plane=None, inclination_deg=None, param=None) -> ReportRow:
        for row in self.rows:
            if row.metric != metric:
                continue
            if planes is not None and row.planes != planes:
                continue
            if sats_per_plane is not None and row.sats_per_plane != sats_per_plane:
                continue
            if inclination_deg is not None and row.inclination_deg != inclination_deg:
                continue
            if param is not None and row.param != param:
                continue
            return row
        raise KeyError(metric)

    def values(self, row: ReportRow) -> list[float]:
        return self.raw[_key(row.planes, row.sats_per_plane, row.inclination_deg, row.param, row.metric)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow([repr(getattr(row, c)) if isinstance(getattr(row, c), float) else getattr(row, c) for c in CSV_COLUMNS])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> ExperimentReport:
        rows = []
        for rec in csv.DictReader(io.StringIO(text)):
            rows.append(
                ReportRow(
                    rec["experiment"],
                    int(rec["planes"]),
                    int(rec["sats_per_plane"]),
                    float(rec["inclination_deg"]),
                    rec["param"],
                    rec["metric"],
                    float(rec["mean"]),
                    float(rec["std"]),
                    int(rec["runs"]),
                )
            )
        name = rows[0].experiment if rows else ""
        return cls(name, rows)

    def to_json(self) -> str:
        return json.dumps(
            {
                "experiment": self.experiment,
                "rows": [vars(r) for r in self.rows],
                "raw": self.raw,
            },
            indent=1,
        )

    @classmethod
    def from_json(cls, text: str) -> ExperimentReport:
        data = json.loads(text)
        return cls(data["experiment"], [ReportRow(**r) for r in data["rows"]], data["raw"])


def _key(planes: int, slots: int, inclination: float, param: str, metric: str) -> str:
    return f"{planes}x{slots}@{inclination:g}|{param}|{metric}"


def _map_runs(fn: Callable, args: list, workers: int) -> list:
    """Apply ``fn`` to each args tuple, preserving order."""
    if workers <= 1 or len(args) <= 1:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*args)))


@dataclass
class RunContext:
    config: ConstellationConfig
    sim_time: float
    job: JobSpec
    los: SatelliteId
    nodes: list[SatelliteId]
    collectors: list[SatelliteId]
    mappers: list[SatelliteId]


def run_context(cfg: ExperimentConfig, config: ConstellationConfig, run: int) -> RunContext:
    """Per-run draws: time in [0, T), a ground station, then node sampling."""
    seed = cfg.base_seed + run
    rng = np.random.default_rng(seed)
    sim_time = float(rng.uniform(0.0, config.period))
    station = cfg.stations[int(rng.integers(len(cfg.stations)))]
    job = replace(cfg.job_template, station=station, rng_seed=seed)
    los, nodes, collectors, mappers = prepare_job(job, config, sim_time)
    return RunContext(config, sim_time, job, los, nodes, collectors, mappers)


def _pct(better: float, other: float) -> float:
    return 100.0 * (other - better) / other if other else 0.0


# -- routing ---------------------------------------------------------------


def _routing_run(cfg: ExperimentConfig, config: ConstellationConfig, run: int) -> dict:
    rng = np.random.default_rng(cfg.base_seed + run)
    sim_time = float(rng.uniform(0.0, config.period))
    pairs = max(1, math.ceil(cfg.route_pairs / cfg.runs))
    m, n = config.sats_per_plane, config.num_planes
    base_km, opt_km, base_hops, opt_hops = [], [], [], []
    hop_delta = 0
    violations = 0
    for _ in range(pairs):
        a = SatelliteId(int(rng.integers(m)), int(rng.integers(n)))
        b = SatelliteId(int(rng.integers(m)), int(rng.integers(n)))
        rb = baseline_route(a, b, config, sim_time)
        ro = optimized_route(a, b, config, sim_time)
        base_km.append(rb.total_distance)
        opt_km.append(ro.total_distance)
        base_hops.append(rb.hops)
        opt_hops.append(ro.hops)
        hop_delta = max(hop_delta, abs(rb.hops - ro.hops))
        violations += ro.total_distance > rb.total_distance
    total_base, total_opt = math.fsum(base_km), math.fsum(opt_km)
    return {
        "baseline_distance_km": total_base / pairs,
        "optimized_distance_km": total_opt / pairs,
        "distance_reduction_pct": _pct(total_opt, total_base),
        "baseline_hops": statistics.fmean(base_hops),
        "optimized_hops": statistics.fmean(opt_hops),
        "hop_delta_max": hop_delta,
        "dominance_violations": violations,
    }


def _collect(report: ExperimentReport, config: ConstellationConfig, per_run: list[dict], param: str = ""):
    for metric in per_run[0]:
        report.add(config, metric, [r[metric] for r in per_run], param)


def routing_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Baseline vs distance-optimised routes on random pairs."""
    report = ExperimentReport("routing")
    for config in cfg.grid(cfg.routing_inclinations):
        per_run = _map_runs(_routing_run, [(cfg, config, r) for r in range(cfg.runs)], cfg.workers)
        _collect(report, config, per_run)
    return report


# -- map allocation --------------------------------------------------------


def _map_run(cfg: ExperimentConfig, config: ConstellationConfig, run: int) -> dict:
    ctx = run_context(cfg, config, run)
    matrix = build_cost_matrix(ctx.collectors, ctx.mappers, config, ctx.sim_time, ctx.job, cfg.link)
    bip = assign_bipartite(matrix)
    eager = assign_eager(matrix)
    rand = assign_random(matrix, ctx.job.rng_seed)
    return {
        "k": matrix.k,
        "random_cost": rand.total_cost,
        "eager_cost": eager.total_cost,
        "bipartite_cost": bip.total_cost,
        "improvement_vs_random_pct": _pct(bip.total_cost, rand.total_cost),
        "improvement_vs_eager_pct": _pct(bip.total_cost, eager.total_cost),
        "eager_minus_bipartite": eager.total_cost - bip.total_cost,
    }


def map_allocation_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Random, eager and bipartite totals on the same cost matrix."""
    report = ExperimentReport("map-alloc")
    for config in cfg.grid():
        per_run = _map_runs(_map_run, [(cfg, config, r) for r in range(cfg.runs)], cfg.workers)
        _collect(report, config, per_run)
    return report


# -- reduce placement ------------------------------------------------------


def _reduce_run(cfg: ExperimentConfig, config: ConstellationConfig, run: int, factors: tuple) -> list[dict]:
    ctx = run_context(cfg, config, run)
    center = place_reducer_center(ctx.mappers, ctx.nodes, config, ctx.sim_time)
    out = []
    for fr in factors:
        job = replace(ctx.job, reduce_compress=fr)
        los_cost = plan_reduce(ctx.mappers, ctx.los, ctx.los, job, config, ctx.sim_time, cfg.link).cost
        center_cost = plan_reduce(ctx.mappers, center, ctx.los, job, config, ctx.sim_time, cfg.link).cost
        out.append(
            {
                "k": len(ctx.mappers),
                "los_cost": los_cost,
                "center_cost": center_cost,
                "reduction_pct": _pct(center_cost, los_cost),
                "center_minus_los": center_cost - los_cost,
            }
        )
    return out


def reduce_placement_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Centre-of-AOI vs LOS reducer at the job's F_R, paired by seed."""
    report = ExperimentReport("reduce-place")
    fr = cfg.job_template.reduce_compress
    for config in cfg.grid():
        per_run = _map_runs(_reduce_run, [(cfg, config, r, (fr,)) for r in range(cfg.runs)], cfg.workers)
        _collect(report, config, [r[0] for r in per_run], f"F_R={fr:g}")
    return report


def reduction_factor_sweep(cfg: ExperimentConfig, factors=None) -> ExperimentReport:
    """Centre vs LOS reduction for each F_R; placements are shared across factors."""
    factors = tuple(factors or cfg.fr_factors)
    if any(f < 1 for f in factors):
        raise ValueError(f"reduction factors must be >= 1, got {factors}")
    report = ExperimentReport("fr-sweep")
    for config in cfg.grid():
        per_run = _map_runs(_reduce_run, [(cfg, config, r, factors) for r in range(cfg.runs)], cfg.workers)
        for idx, fr in enumerate(factors):
            _collect(report, config, [r[idx] for r in per_run], f"F_R={fr:g}")
    return report


# -- contention ------------------------------------------------------------


def visit_stats(routes: list[Route]) -> dict:
    """Max, mean, max/mean and Gini of node visit counts, plus the busiest relay."""
    counts = contention_counts(routes)
    relay = contention_counts(Route(r.path[1:-1]) for r in routes if r.hops > 1)
    values = np.array(sorted(counts.values()), dtype=float)
    if values.size == 0:
        return {"max": 0.0, "mean": 0.0, "max_over_mean": 0.0, "gini": 0.0, "relay_max": 0.0}
    n = values.size
    gini = float((2.0 * np.arange(1, n + 1) - n - 1) @ values / (n * values.sum()))
    mean = float(values.mean())
    return {
        "max": float(values.max()),
        "mean": mean,
        "max_over_mean": float(values.max()) / mean,
        "gini": gini,
        "relay_max": float(max(relay.values(), default=0)),
    }


def _contention_run(cfg: ExperimentConfig, config: ConstellationConfig, run: int) -> dict:
    ctx = run_context(cfg, config, run)
    matrix = build_cost_matrix(ctx.collectors, ctx.mappers, config, ctx.sim_time, ctx.job, cfg.link)
    out = {}
    for name, assignment in (
        ("random", assign_random(matrix, ctx.job.rng_seed)),
        ("eager", assign_eager(matrix)),
        ("bipartite", assign_bipartite(matrix)),
    ):
        routes = [matrix.routes[i][j] for i, j in enumerate(assignment.mapping)]
        for stat, value in visit_stats(routes).items():
            out[f"map_{name}_{stat}"] = value
    center = place_reducer_center(ctx.mappers, ctx.nodes, config, ctx.sim_time)
    for name, reducer in (("los", ctx.los), ("center", center)):
        plan = plan_reduce(ctx.mappers, reducer, ctx.los, ctx.job, config, ctx.sim_time, cfg.link)
        routes = [r for r in (*plan.mapper_routes, plan.downlink_route) if r.hops]
        for stat, value in visit_stats(routes).items():
            out[f"reduce_{name}_{stat}"] = value
    return out


def contention_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Node-visit distributions per allocation strategy and reducer policy."""
    report = ExperimentReport("contention")
    for config in cfg.grid():
        per_run = _map_runs(_contention_run, [(cfg, config, r) for r in range(cfg.runs)], cfg.workers)
        _collect(report, config, per_run)
    return report


EXPERIMENTS = {
    "routing": routing_experiment,
    "map-alloc": map_allocation_experiment,
    "reduce-place": reduce_placement_experiment,
    "fr-sweep": reduction_factor_sweep,
    "contention": contention_experiment,
}
