"""Collect-map-reduce placement and routing on LEO Walker Delta shells."""
from .constellation import (
    ConstellationConfig,
    SatelliteId,
    SatelliteState,
    inter_plane_distance,
    intra_plane_distance,
    orbital_period,
    satellite_state,
)
from .geo import AoiState, Direction, GeoBoundingBox, GroundStation
from .linkmodel import CostParams, LinkParams
from .routing import Route, baseline_route, manhattan_hops, optimized_route
from .scheduler import JobSpec, ReducerPolicy, Strategy, run_job

__all__ = [
    "AoiState",
    "ConstellationConfig",
    "CostParams",
    "Direction",
    "GeoBoundingBox",
    "GroundStation",
    "JobSpec",
    "LinkParams",
    "ReducerPolicy",
    "Route",
    "SatelliteId",
    "SatelliteState",
    "Strategy",
    "baseline_route",
    "inter_plane_distance",
    "intra_plane_distance",
    "manhattan_hops",
    "optimized_route",
    "orbital_period",
    "run_job",
    "satellite_state",
]
