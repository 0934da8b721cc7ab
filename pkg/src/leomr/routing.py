"""
Routing on the +Grid torus.

Vertical hops move along a plane (slot +-1) and always cost the constant
intra-plane distance.  Horizontal hops cross to a neighbouring plane
(plane +-1); their length follows the source satellite's orbital phase,
shrinking towards the poles.  Every route is hop-minimal, so the only
freedom is *where* along the path the horizontal hops are spent.

All link lengths are taken from a single topology snapshot at
``sim_time``.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from .constellation import (
    ConstellationConfig,
    SatelliteId,
    argument_of_latitude,
    inter_plane_base_distance,
    intra_plane_distance,
)
from .errors import DomainError

# forward/current distances closer than this count as equal (km)
TIE_TOL_KM = 1e-9


@dataclass(frozen=True)
class Route:
    path: tuple[SatelliteId, ...]
    link_distances: tuple[float, ...] = field(default=())

    @property
    def hops(self) -> int:
        return len(self.path) - 1

    @property
    def total_distance(self) -> float:
        return math.fsum(self.link_distances)

    @property
    def source(self) -> SatelliteId:
        return self.path[0]

    @property
    def target(self) -> SatelliteId:
        return self.path[-1]

    def to_dict(self) -> dict:
        return {
            "path": [[s.slot, s.plane] for s in self.path],
            "hops": self.hops,
            "link_distances_km": list(self.link_distances),
            "total_distance_km": self.total_distance,
        }


class Topology:
    """Link lengths of the whole shell frozen at one instant."""

    def __init__(self, config: ConstellationConfig, sim_time: float, crossover_mask_deg: float | None = None):
        self.config = config
        self.sim_time = sim_time
        self.intra = intra_plane_distance(config)
        plane, slot = np.meshgrid(
            np.arange(config.num_planes), np.arange(config.sats_per_plane), indexing="ij"
        )
        u = argument_of_latitude(config, slot, plane, sim_time)
        ci = math.cos(config.inclination_rad)
        # inter-plane length at the source's phase; 2*pi*t/T equals the argument of latitude
        self.inter = inter_plane_base_distance(config) * np.sqrt(
            np.cos(u) ** 2 + ci * ci * np.sin(u) ** 2
        )
        if crossover_mask_deg is None:
            self.cross_ok = np.ones_like(self.inter, dtype=bool)
        else:
            lat = np.degrees(np.arcsin(math.sin(config.inclination_rad) * np.sin(u)))
            self.cross_ok = np.abs(lat) <= crossover_mask_deg
        self._inter = self.inter.tolist()
        self._cross_ok = self.cross_ok.tolist()

    def horizontal(self, sat: SatelliteId) -> float:
        return self._inter[sat.plane][sat.slot]

    def can_cross(self, sat: SatelliteId) -> bool:
        return self._cross_ok[sat.plane][sat.slot]


@lru_cache(maxsize=64)
def topology(config: ConstellationConfig, sim_time: float, crossover_mask_deg: float | None = None) -> Topology:
    return Topology(config, sim_time, crossover_mask_deg)


def _check(sat, config: ConstellationConfig) -> SatelliteId:
    sat = SatelliteId(*sat)
    if not (0 <= sat.slot < config.sats_per_plane and 0 <= sat.plane < config.num_planes):
        raise DomainError(
            f"satellite (slot={sat.slot}, plane={sat.plane}) outside a "
            f"{config.num_planes}-plane x {config.sats_per_plane}-slot shell"
        )
    return sat


def _shortest_step(delta: int, size: int) -> tuple[int, int]:
    """(direction, steps) of the shorter way round a ring; ties go +1."""
    fwd = delta % size
    back = size - fwd if fwd else 0
    if fwd <= back:
        return (1 if fwd else 0), fwd
    return -1, back


def manhattan_hops(a, b, config: ConstellationConfig) -> int:
    a, b = _check(a, config), _check(b, config)
    _, vs = _shortest_step(b.slot - a.slot, config.sats_per_plane)
    _, hs = _shortest_step(b.plane - a.plane, config.num_planes)
    return vs + hs


class _Walker:
    def __init__(self, start: SatelliteId, topo: Topology):
        self.topo = topo
        self.m = topo.config.sats_per_plane
        self.n = topo.config.num_planes
        self.path = [start]
        self.links: list[float] = []

    @property
    def here(self) -> SatelliteId:
        return self.path[-1]

    def vertical(self, step: int):
        s, o = self.here
        self.links.append(self.topo.intra)
        self.path.append(SatelliteId((s + step) % self.m, o))

    def horizontal(self, step: int):
        s, o = self.here
        self.links.append(self.topo.horizontal(self.here))
        self.path.append(SatelliteId(s, (o + step) % self.n))

    def route(self) -> Route:
        return Route(tuple(self.path), tuple(self.links))


def baseline_route(a, b, config: ConstellationConfig, sim_time: float) -> Route:
    """Dimension-order route: every cross-plane hop first, then along the plane."""
    a, b = _check(a, config), _check(b, config)
    topo = topology(config, sim_time)
    vdir, vsteps = _shortest_step(b.slot - a.slot, config.sats_per_plane)
    hdir, hsteps = _shortest_step(b.plane - a.plane, config.num_planes)
    w = _Walker(a, topo)
    for _ in range(hsteps):
        w.horizontal(hdir)
    for _ in range(vsteps):
        w.vertical(vdir)
    return w.route()


def _tied_directions(delta: int, size: int) -> tuple[list[int], int]:
    step, count = _shortest_step(delta, size)
    if count and 2 * count == size:
        return [step, -step], count
    return [step], count


def _greedy_route(a: SatelliteId, b: SatelliteId, topo: Topology) -> Route:
    """Greedy walk; on a half-ring tie both ways are walked and the shorter kept."""
    vdirs, v_left = _tied_directions(b.slot - a.slot, topo.config.sats_per_plane)
    hdirs, h_left = _tied_directions(b.plane - a.plane, topo.config.num_planes)
    best = None
    for vdir in vdirs:
        for hdir in hdirs:
            route = _greedy_walk(a, topo, vdir, v_left, hdir, h_left)
            if best is None or route.total_distance < best.total_distance - TIE_TOL_KM:
                best = route
    return best


def _greedy_walk(a: SatelliteId, topo: Topology, vdir: int, v_left: int, hdir: int, h_left: int) -> Route:
    m = topo.config.sats_per_plane
    w = _Walker(a, topo)
    while v_left or h_left:
        here = w.here
        if not h_left:
            go_vertical = True
        elif not v_left:
            go_vertical = False
        elif not topo.can_cross(here):
            go_vertical = True
        else:
            current = topo.horizontal(here)
            forward = topo.horizontal(SatelliteId((here.slot + vdir) % m, here.plane))
            backward = topo.horizontal(SatelliteId((here.slot - vdir) % m, here.plane))
            if forward > current + TIE_TOL_KM and backward > current + TIE_TOL_KM:
                # local minimum of the cross-plane length: cross here
                go_vertical = False
            elif forward <= current + TIE_TOL_KM:
                # links shorten ahead: move along the plane first
                go_vertical = True
            else:
                go_vertical = False
        if go_vertical:
            w.vertical(vdir)
            v_left -= 1
        else:
            w.horizontal(hdir)
            h_left -= 1
    return w.route()


def optimized_route(
    a, b, config: ConstellationConfig, sim_time: float, crossover_mask_deg: float | None = None
) -> Route:
    """Hop-preserving route that spends cross-plane hops where links are short.

    At each node, with hops left in both axes, the router compares the
    cross-plane length here with the one a slot ahead (towards ``b``) and
    a slot behind.  It keeps moving along the plane while the link ahead
    is no longer than the current one and crosses otherwise, so crossings
    land at the local minimum of the cross-plane length.  Once one axis is
    exhausted only the other is used, so the hop count always equals
    :func:`manhattan_hops`.

    ``crossover_mask_deg`` forbids crossing from nodes above that absolute
    latitude while vertical hops remain.  Without the mask the route is
    never longer than :func:`baseline_route`; if the greedy walk would be,
    the baseline path is returned instead (possible only with non-zero
    Walker phasing).
    """
    a, b = _check(a, config), _check(b, config)
    topo = topology(config, sim_time, crossover_mask_deg)
    route = _greedy_route(a, b, topo)
    if crossover_mask_deg is None:
        base = baseline_route(a, b, config, sim_time)
        if base.total_distance < route.total_distance:
            return base
    return route


def min_hop_preserving_distance(a, b, config: ConstellationConfig, sim_time: float) -> float:
    """Shortest total length over all hop-minimal paths (dynamic programme).

    When the two ways round a ring tie, both are considered.
    """
    a, b = _check(a, config), _check(b, config)
    topo = topology(config, sim_time)
    m, n = config.sats_per_plane, config.num_planes
    best = math.inf
    vdirs, vs = _tied_directions(b.slot - a.slot, m)
    hdirs, hs = _tied_directions(b.plane - a.plane, n)
    for vd in vdirs:
        for hd in hdirs:
            # cost[i][j]: best length after i vertical and j horizontal hops
            cost = [[math.inf] * (hs + 1) for _ in range(vs + 1)]
            cost[0][0] = 0.0
            for i in range(vs + 1):
                for j in range(hs + 1):
                    c = cost[i][j]
                    if c == math.inf:
                        continue
                    node = SatelliteId((a.slot + vd * i) % m, (a.plane + hd * j) % n)
                    if i < vs:
                        cost[i + 1][j] = min(cost[i + 1][j], c + topo.intra)
                    if j < hs:
                        cost[i][j + 1] = min(cost[i][j + 1], c + topo.horizontal(node))
            best = min(best, cost[vs][hs])
    return best


def contention_counts(routes: Iterable[Route]) -> Counter:
    """How many routes pass through each satellite (endpoints included)."""
    counts: Counter = Counter()
    for route in routes:
        counts.update(set(route.path))
    return counts
