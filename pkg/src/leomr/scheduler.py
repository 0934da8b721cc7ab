"""
Map-task allocation and reducer placement.

Collectors hold the data (tasks), mappers are the processors.  Each
(task, processor) pair costs processing time plus store-and-forward
transfer along the distance-optimised route.  Three allocators share that
matrix: a seeded random permutation, a greedy pass in task order, and the
optimal assignment (Hungarian method).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .constellation import ConstellationConfig, SatelliteId, ShellSnapshot
from .errors import DirectionMixError, JobInfeasibleError
from .geo import (
    US_AOI,
    Direction,
    GeoBoundingBox,
    GroundStation,
    select_aoi_nodes,
    select_collectors_and_mappers,
    select_los_node,
)
from .linkmodel import CostParams, LinkParams, placement_cost, transfer_cost
from .routing import Route, contention_counts, optimized_route


class Strategy(str, enum.Enum):
    RANDOM = "random"
    EAGER = "eager"
    BIPARTITE = "bipartite"


class ReducerPolicy(str, enum.Enum):
    LOS = "los"
    CENTER = "center"


@dataclass(frozen=True)
class JobSpec:
    aoi: GeoBoundingBox = US_AOI
    station: GroundStation | None = None
    map_compress: float = 1.0
    reduce_compress: float = 5.0
    cost_params: CostParams = field(default_factory=CostParams)
    direction: Direction = Direction.ASCENDING
    rng_seed: int = 0
    fraction: float = 0.2

    def __post_init__(self):
        if self.map_compress < 1 or self.reduce_compress < 1:
            raise ValueError(
                f"compression factors must be >= 1, got F_M={self.map_compress}, F_R={self.reduce_compress}"
            )
        object.__setattr__(self, "direction", Direction(self.direction))

    @property
    def data_volume(self) -> float:
        return self.cost_params.data_volume


@dataclass
class CostMatrix:
    tasks: list[SatelliteId]
    processors: list[SatelliteId]
    costs: np.ndarray
    routes: list[list[Route]] = field(default_factory=list, repr=False)

    @property
    def k(self) -> int:
        return len(self.tasks)


@dataclass(frozen=True)
class Assignment:
    mapping: tuple[int, ...]  # task index -> processor index
    total_cost: float

    @classmethod
    def from_mapping(cls, costs, mapping) -> Assignment:
        costs = np.asarray(costs, dtype=float)
        mapping = tuple(int(j) for j in mapping)
        return cls(mapping, math.fsum(costs[i, j] for i, j in enumerate(mapping)))


def build_cost_matrix(
    collectors,
    mappers,
    config: ConstellationConfig,
    sim_time: float,
    job: JobSpec,
    link_params: LinkParams = LinkParams(),
) -> CostMatrix:
    collectors = [SatelliteId(*c) for c in collectors]
    mappers = [SatelliteId(*p) for p in mappers]
    if len(collectors) != len(mappers) or not collectors:
        raise ValueError(f"need k >= 1 collectors and mappers, got {len(collectors)} and {len(mappers)}")
    snap = ShellSnapshot.at(config, sim_time)
    flags = {bool(snap.ascending[s.plane, s.slot]) for s in collectors + mappers}
    if len(flags) > 1:
        raise DirectionMixError("collectors and mappers mix ascending and descending satellites")
    k = len(collectors)
    costs = np.empty((k, k))
    routes = []
    for i, task in enumerate(collectors):
        row = []
        for j, proc in enumerate(mappers):
            route = optimized_route(task, proc, config, sim_time)
            costs[i, j] = placement_cost(
                (d * 1e3 for d in route.link_distances), job.data_volume, job.cost_params, link_params
            )
            row.append(route)
        routes.append(row)
    return CostMatrix(collectors, mappers, costs, routes)


def _as_array(matrix) -> np.ndarray:
    costs = matrix.costs if isinstance(matrix, CostMatrix) else matrix
    costs = np.asarray(costs, dtype=float)
    if costs.ndim != 2 or costs.shape[0] != costs.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {costs.shape}")
    if not np.isfinite(costs).all():
        raise ValueError("cost matrix has non-finite entries")
    return costs


def hungarian(costs) -> list[int]:
    """Minimum-cost perfect matching of a square matrix, O(k^3).

    Shortest augmenting paths with row/column potentials; returns the
    column assigned to each row.
    """
    c = np.asarray(costs, dtype=float)
    k = c.shape[0]
    if k == 0:
        return []
    # 1-based arrays with a virtual column 0
    u = np.zeros(k + 1)
    v = np.zeros(k + 1)
    match_col = np.zeros(k + 1, dtype=int)  # row matched to each column
    way = np.zeros(k + 1, dtype=int)
    for row in range(1, k + 1):
        match_col[0] = row
        col0 = 0
        minv = np.full(k + 1, np.inf)
        used = np.zeros(k + 1, dtype=bool)
        while True:
            used[col0] = True
            r = match_col[col0]
            free = ~used[1:]
            reduced = c[r - 1] - u[r] - v[1:]
            better = free & (reduced < minv[1:])
            minv[1:][better] = reduced[better]
            way[1:][better] = col0
            cand = np.where(free, minv[1:], np.inf)
            col1 = int(np.argmin(cand)) + 1
            delta = cand[col1 - 1]
            u[match_col[used]] += delta
            v[used] -= delta
            minv[1:][free] -= delta
            col0 = col1
            if match_col[col0] == 0:
                break
        while col0:
            prev = way[col0]
            match_col[col0] = match_col[prev]
            col0 = prev
    result = [0] * k
    for col in range(1, k + 1):
        result[match_col[col] - 1] = col - 1
    return result


def assign_bipartite(matrix) -> Assignment:
    costs = _as_array(matrix)
    return Assignment.from_mapping(costs, hungarian(costs))


def assign_eager(matrix) -> Assignment:
    """Tasks in order, each to its cheapest still-free processor (lowest index on ties)."""
    costs = _as_array(matrix)
    free = list(range(costs.shape[0]))
    mapping = []
    for row in costs:
        best = min(free, key=lambda j: (row[j], j))
        free.remove(best)
        mapping.append(best)
    return Assignment.from_mapping(costs, mapping)


def assign_random(matrix, rng_seed: int = 0) -> Assignment:
    costs = _as_array(matrix)
    perm = np.random.default_rng(rng_seed).permutation(costs.shape[0])
    return Assignment.from_mapping(costs, perm)


ASSIGNERS = {
    Strategy.BIPARTITE: lambda m, seed: assign_bipartite(m),
    Strategy.EAGER: lambda m, seed: assign_eager(m),
    Strategy.RANDOM: assign_random,
}


def place_reducer_center(mappers, candidates, config: ConstellationConfig, sim_time: float) -> SatelliteId:
    """Candidate with the smallest summed route distance from all mappers."""
    mappers = [SatelliteId(*m) for m in mappers]
    if not mappers:
        raise ValueError("no mappers to centre the reducer on")
    candidates = sorted({SatelliteId(*c) for c in candidates}, key=SatelliteId.key)
    if not candidates:
        raise JobInfeasibleError("no candidate satellites for the reducer")
    best, best_sum = None, math.inf
    for cand in candidates:
        total = math.fsum(optimized_route(m, cand, config, sim_time).total_distance for m in mappers)
        if total < best_sum:
            best, best_sum = cand, total
    return best


@dataclass(frozen=True)
class ReducePlan:
    cost: float
    mapper_routes: tuple[Route, ...]
    downlink_route: Route


def plan_reduce(
    mappers,
    reducer: SatelliteId,
    los: SatelliteId,
    job: JobSpec,
    config: ConstellationConfig,
    sim_time: float,
    link_params: LinkParams = LinkParams(),
) -> ReducePlan:
    """Reduce-phase cost together with the routes it uses.

    Each mapper ships V/F_M to the reducer, the reducer spends r_p*K and
    forwards k*V/(F_M*F_R) to the LOS node.
    """
    mappers = [SatelliteId(*m) for m in mappers]
    cp = job.cost_params
    per_mapper = job.data_volume / job.map_compress
    result_volume = len(mappers) * per_mapper / job.reduce_compress
    mapper_routes = tuple(optimized_route(m, reducer, config, sim_time) for m in mappers)
    down = optimized_route(reducer, los, config, sim_time)
    inbound = math.fsum(
        transfer_cost([d * 1e3 for d in r.link_distances], per_mapper, cp, link_params) for r in mapper_routes
    )
    outbound = transfer_cost([d * 1e3 for d in down.link_distances], result_volume, cp, link_params)
    cost = inbound + cp.reduce_factor * cp.norm_constant + outbound
    return ReducePlan(cost, mapper_routes, down)


def reduce_phase_cost(mappers, reducer, los, job: JobSpec, config, sim_time, link_params=LinkParams()) -> float:
    return plan_reduce(mappers, reducer, los, job, config, sim_time, link_params).cost


@dataclass
class JobCostReport:
    strategy: Strategy
    reducer_policy: ReducerPolicy
    sim_time: float
    los: SatelliteId
    collectors: list[SatelliteId]
    mappers: list[SatelliteId]
    reducer: SatelliteId
    assignment: Assignment
    map_total: float
    map_max: float
    reduce_cost: float
    map_routes: list[Route]
    reduce_routes: list[Route]
    map_contention: dict
    reduce_contention: dict

    @property
    def end_to_end(self) -> float:
        return self.map_total + self.reduce_cost

    def summary(self) -> dict:
        return {
            "strategy": self.strategy.value,
            "reducer_policy": self.reducer_policy.value,
            "sim_time": self.sim_time,
            "k": len(self.collectors),
            "los": list(self.los),
            "reducer": list(self.reducer),
            "map_total": self.map_total,
            "map_max": self.map_max,
            "reduce_cost": self.reduce_cost,
            "end_to_end": self.end_to_end,
        }


def prepare_job(job: JobSpec, config: ConstellationConfig, sim_time: float):
    """LOS node, AOI nodes and the collector/mapper split for one job."""
    if job.station is None:
        raise ValueError("job has no ground station")
    los = select_los_node(config, job.station, sim_time)
    nodes = select_aoi_nodes(config, job.aoi, sim_time, job.direction)
    if not nodes:
        raise JobInfeasibleError(f"no {job.direction.value} satellites over the AOI at t={sim_time:.1f}s")
    collectors, mappers = select_collectors_and_mappers(nodes, job.fraction, job.rng_seed)
    return los, nodes, collectors, mappers


def run_job(
    job: JobSpec,
    config: ConstellationConfig,
    sim_time: float,
    strategy: Strategy | str = Strategy.BIPARTITE,
    reducer_policy: ReducerPolicy | str = ReducerPolicy.CENTER,
    link_params: LinkParams = LinkParams(),
) -> JobCostReport:
    strategy = Strategy(strategy)
    reducer_policy = ReducerPolicy(reducer_policy)
    los, nodes, collectors, mappers = prepare_job(job, config, sim_time)
    matrix = build_cost_matrix(collectors, mappers, config, sim_time, job, link_params)
    assignment = ASSIGNERS[strategy](matrix, job.rng_seed)
    map_costs = [matrix.costs[i, j] for i, j in enumerate(assignment.mapping)]
    map_routes = [matrix.routes[i][j] for i, j in enumerate(assignment.mapping)]
    if reducer_policy is ReducerPolicy.CENTER:
        reducer = place_reducer_center(mappers, nodes, config, sim_time)
    else:
        reducer = los
    plan = plan_reduce(mappers, reducer, los, job, config, sim_time, link_params)
    reduce_routes = [r for r in plan.mapper_routes if r.hops] + ([plan.downlink_route] if plan.downlink_route.hops else [])
    return JobCostReport(
        strategy=strategy,
        reducer_policy=reducer_policy,
        sim_time=sim_time,
        los=los,
        collectors=collectors,
        mappers=mappers,
        reducer=reducer,
        assignment=assignment,
        map_total=assignment.total_cost,
        map_max=max(map_costs),
        reduce_cost=plan.cost,
        map_routes=map_routes,
        reduce_routes=reduce_routes,
        map_contention=dict(contention_counts(map_routes)),
        reduce_contention=dict(contention_counts(reduce_routes)),
    )
