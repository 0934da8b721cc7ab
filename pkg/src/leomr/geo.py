"""
AOI membership, LOS node selection and collector/mapper sampling.

A satellite is inside an AOI iff its geodetic subpoint lies in the
bounding box.  Jobs draw either only ascending or only descending
satellites, never a mix.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .constellation import (
    R_EARTH_KM,
    ConstellationConfig,
    SatelliteId,
    SatelliteState,
    ShellSnapshot,
)
from .errors import ConfigError, JobInfeasibleError


class AoiState(enum.Enum):
    WITHIN_ASCENDING = "within_ascending"
    WITHIN_DESCENDING = "within_descending"
    OUTSIDE = "outside"


class Direction(str, enum.Enum):
    ASCENDING = "ascending"
    DESCENDING = "descending"


@dataclass(frozen=True)
class GeoBoundingBox:
    """Lat/lon box given by its upper-left and lower-right corners (degrees).

    When ``upper_left`` longitude exceeds ``lower_right`` longitude the box
    wraps across the antimeridian.
    """

    upper_left: tuple[float, float]
    lower_right: tuple[float, float]

    def __post_init__(self):
        (north, west), (south, east) = self.upper_left, self.lower_right
        if north < south:
            raise ConfigError(f"upper-left latitude {north} is south of lower-right {south}")
        for lat in (north, south):
            if not -90.0 <= lat <= 90.0:
                raise ConfigError(f"latitude {lat} outside [-90, 90]")
        for lon in (west, east):
            if not -180.0 <= lon <= 180.0:
                raise ConfigError(f"longitude {lon} outside [-180, 180]")

    @property
    def degenerate(self) -> bool:
        return self.upper_left[0] == self.lower_right[0] or self.upper_left[1] == self.lower_right[1]

    @property
    def center(self) -> tuple[float, float]:
        (north, west), (south, east) = self.upper_left, self.lower_right
        span = (east - west) % 360.0
        lon = (west + span / 2.0 + 180.0) % 360.0 - 180.0
        return ((north + south) / 2.0, lon)

    def contains(self, lat, lon):
        """Vectorised point-in-box test; a zero-area box contains nothing."""
        lat = np.asarray(lat)
        lon = np.asarray(lon)
        if self.degenerate:
            return np.zeros(np.broadcast(lat, lon).shape, dtype=bool)
        (north, west), (south, east) = self.upper_left, self.lower_right
        in_lat = (lat >= south) & (lat <= north)
        if west <= east:
            in_lon = (lon >= west) & (lon <= east)
        else:
            in_lon = (lon >= west) | (lon <= east)
        return in_lat & in_lon


# Continental United States
US_AOI = GeoBoundingBox(upper_left=(49.0, -125.0), lower_right=(24.0, -66.0))


@dataclass(frozen=True)
class GroundStation:
    name: str
    location: tuple[float, float]
    population: int = 0


def load_ground_stations(path: str | Path | None = None, min_population: int = 0) -> list[GroundStation]:
    """Read ``name,lat_deg,lon_deg,population`` rows; defaults to the bundled list."""
    if path is None:
        text = resources.files("leomr.data").joinpath("ground_stations.csv").read_text()
    else:
        text = Path(path).read_text()
    rows = csv.DictReader(text.splitlines())
    expected = ["name", "lat_deg", "lon_deg", "population"]
    if rows.fieldnames != expected:
        raise ConfigError(f"ground-station CSV header must be {','.join(expected)}, got {rows.fieldnames}")
    stations = []
    for lineno, row in enumerate(rows, start=2):
        try:
            station = GroundStation(
                name=row["name"],
                location=(float(row["lat_deg"]), float(row["lon_deg"])),
                population=int(row["population"]),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"ground-station CSV line {lineno}: {exc}") from None
        if station.population > min_population:
            stations.append(station)
    return stations


def classify_aoi_state(state: SatelliteState, aoi: GeoBoundingBox) -> AoiState:
    if not aoi.contains(state.latitude, state.longitude):
        return AoiState.OUTSIDE
    return AoiState.WITHIN_ASCENDING if state.ascending else AoiState.WITHIN_DESCENDING


def select_aoi_nodes(
    config: ConstellationConfig,
    aoi: GeoBoundingBox,
    sim_time: float,
    direction: Direction | str = Direction.ASCENDING,
) -> list[SatelliteId]:
    """Satellites over ``aoi`` moving in ``direction``, in (plane, slot) order."""
    direction = Direction(direction)
    snap = ShellSnapshot.at(config, sim_time)
    mask = aoi.contains(snap.latitude, snap.longitude)
    if direction is Direction.ASCENDING:
        mask &= snap.ascending
    else:
        mask &= ~snap.ascending
    planes, slots = np.nonzero(mask)
    return [SatelliteId(int(s), int(o)) for o, s in zip(planes, slots)]


def great_circle_km(lat1, lon1, lat2, lon2):
    """Haversine distance on a sphere of radius R_EARTH_KM."""
    p1, p2 = np.radians(lat1), np.radians(lat2)
    dp = p2 - p1
    dl = np.radians(np.asarray(lon2) - np.asarray(lon1))
    a = np.sin(dp / 2) ** 2 + np.cos(p1) * np.cos(p2) * np.sin(dl / 2) ** 2
    return 2.0 * R_EARTH_KM * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0)))


def _elevation_deg(station: GroundStation, ecef: np.ndarray) -> np.ndarray:
    lat, lon = map(math.radians, station.location)
    up = np.array([math.cos(lat) * math.cos(lon), math.cos(lat) * math.sin(lon), math.sin(lat)])
    rel = ecef - R_EARTH_KM * up
    sin_el = rel @ up / np.linalg.norm(rel, axis=-1)
    return np.degrees(np.arcsin(np.clip(sin_el, -1.0, 1.0)))


def select_los_node(
    config: ConstellationConfig,
    station: GroundStation,
    sim_time: float,
    elevation_mask_deg: float | None = None,
) -> SatelliteId:
    """Satellite whose subpoint is nearest the station.

    Ties go to the smallest (plane, slot).  With ``elevation_mask_deg`` set,
    only satellites at or above that elevation are eligible; if none are,
    the mask is ignored.
    """
    snap = ShellSnapshot.at(config, sim_time)
    dist = great_circle_km(station.location[0], station.location[1], snap.latitude, snap.longitude)
    if elevation_mask_deg is not None:
        visible = _elevation_deg(station, snap.ecef) >= elevation_mask_deg
        if visible.any():
            dist = np.where(visible, dist, np.inf)
    # ravel order is (plane, slot) lexicographic, so argmin's first hit is the tie-break
    flat = int(np.argmin(dist.ravel()))
    plane, slot = divmod(flat, config.sats_per_plane)
    return SatelliteId(slot, plane)


def select_collectors_and_mappers(
    aoi_nodes, fraction: float = 0.2, rng_seed: int = 0
) -> tuple[list[SatelliteId], list[SatelliteId]]:
    """Two disjoint, equally sized random subsets of ``aoi_nodes``.

    Each has floor(fraction * n) members.  Nodes are put in canonical order,
    shuffled with a seeded generator, then split: the first k are
    collectors and the next k mappers.
    """
    nodes = sorted({SatelliteId(*n) for n in aoi_nodes}, key=SatelliteId.key)
    n = len(nodes)
    if not 0.0 < fraction <= 0.5:
        raise ConfigError(f"fraction must lie in (0, 0.5], got {fraction}")
    # exact rational arithmetic: 0.2 * 15 must not ceil to 4
    share = Fraction(fraction).limit_denominator(10**6) * n
    k = math.floor(share)
    if k < 1 or 2 * math.ceil(share) > n:
        raise JobInfeasibleError(
            f"{n} AOI nodes cannot supply two disjoint sets at fraction {fraction}"
        )
    order = np.random.default_rng(rng_seed).permutation(n)
    shuffled = [nodes[i] for i in order]
    return shuffled[:k], shuffled[k : 2 * k]
