"""
Walker Delta shell geometry.

Satellites are addressed on an N x M grid: ``plane`` in [0, N) and ``slot``
in [0, M).  Positions come from an ideal circular Keplerian orbit on a
spherical Earth, rotated into ECEF with a uniform sidereal rate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, DomainError

R_EARTH_KM = 6371.0
MU_EARTH = 3.986e14  # m^3/s^2
OMEGA_EARTH = 7.2921150e-5  # rad/s, sidereal


def orbital_period(altitude_km: float, mu: float = MU_EARTH) -> float:
    """Period in seconds of a circular orbit ``altitude_km`` above the surface.

    Zero altitude is accepted (the surface-orbit period); negative raises.
    """
    if altitude_km < 0 or not math.isfinite(altitude_km):
        raise DomainError(f"altitude must be >= 0 km, got {altitude_km}")
    if mu <= 0:
        raise DomainError(f"gravitational parameter must be positive, got {mu}")
    r_m = (R_EARTH_KM + altitude_km) * 1e3
    return 2.0 * math.pi * math.sqrt(r_m**3 / mu)


@dataclass(frozen=True)
class ConstellationConfig:
    """One Walker Delta shell: N planes of M satellites each."""

    num_planes: int
    sats_per_plane: int
    altitude_km: float = 530.0
    inclination_deg: float = 87.0
    phase_offset: int = 0
    epoch: float = 0.0

    def __post_init__(self):
        if int(self.num_planes) != self.num_planes or self.num_planes < 1:
            raise ConfigError(f"num_planes must be an integer >= 1, got {self.num_planes}")
        if int(self.sats_per_plane) != self.sats_per_plane or self.sats_per_plane < 1:
            raise ConfigError(f"sats_per_plane must be an integer >= 1, got {self.sats_per_plane}")
        if not 300.0 <= self.altitude_km <= 2000.0:
            raise ConfigError(f"altitude_km must lie in [300, 2000], got {self.altitude_km}")
        if not 0.0 < self.inclination_deg <= 90.0:
            raise ConfigError(f"inclination_deg must lie in (0, 90], got {self.inclination_deg}")
        if not 0 <= self.phase_offset < self.num_planes:
            raise ConfigError(
                f"phase_offset must lie in [0, num_planes), got {self.phase_offset}"
            )

    @property
    def total_satellites(self) -> int:
        return self.num_planes * self.sats_per_plane

    @property
    def radius_km(self) -> float:
        return R_EARTH_KM + self.altitude_km

    @property
    def inclination_rad(self) -> float:
        return math.radians(self.inclination_deg)

    @cached_property
    def period(self) -> float:
        return orbital_period(self.altitude_km)

    def satellites(self) -> list[SatelliteId]:
        """All satellites in canonical (plane, slot) order."""
        return [
            SatelliteId(s, o)
            for o in range(self.num_planes)
            for s in range(self.sats_per_plane)
        ]


class SatelliteId(NamedTuple):
    slot: int
    plane: int

    def wrap(self, config: ConstellationConfig) -> SatelliteId:
        return SatelliteId(self.slot % config.sats_per_plane, self.plane % config.num_planes)

    def key(self) -> tuple[int, int]:
        """Canonical ordering key: plane first, then slot."""
        return (self.plane, self.slot)


@dataclass(frozen=True)
class SatelliteState:
    id: SatelliteId
    phase_time: float
    ecef: tuple[float, float, float]
    geodetic: tuple[float, float, float]
    ascending: bool

    @property
    def latitude(self) -> float:
        return self.geodetic[0]

    @property
    def longitude(self) -> float:
        return self.geodetic[1]


def intra_plane_distance(config: ConstellationConfig) -> float:
    """Constant chord length (km) between in-plane neighbours."""
    m = config.sats_per_plane
    return config.radius_km * math.sqrt(2.0 * (1.0 - math.cos(2.0 * math.pi / m)))


def inter_plane_base_distance(config: ConstellationConfig) -> float:
    """Cross-plane neighbour distance (km) at the equator, the maximum."""
    n = config.num_planes
    return config.radius_km * math.sqrt(2.0 * (1.0 - math.cos(2.0 * math.pi / n)))


def inter_plane_distance(config: ConstellationConfig, t: float) -> float:
    """Cross-plane link length (km) for a source satellite ``t`` seconds past
    its ascending equator crossing.  ``t`` is reduced modulo the period.
    """
    period = config.period
    t = math.fmod(t, period)
    if t < 0:
        t += period
    theta = 2.0 * math.pi * t / period
    ci = math.cos(config.inclination_rad)
    return inter_plane_base_distance(config) * math.sqrt(
        math.cos(theta) ** 2 + ci * ci * math.sin(theta) ** 2
    )


def argument_of_latitude(config: ConstellationConfig, slot, plane, sim_time: float):
    """In-plane angle (rad, wrapped to [0, 2pi)) measured from the ascending node.

    Works element-wise on numpy arrays as well as on scalars.
    """
    m, n = config.sats_per_plane, config.num_planes
    u = (
        2.0 * np.pi * np.asarray(slot) / m
        + 2.0 * np.pi * config.phase_offset * np.asarray(plane) / (m * n)
        + 2.0 * np.pi * (sim_time - config.epoch) / config.period
    )
    return np.mod(u, 2.0 * np.pi)


def phase_time(config: ConstellationConfig, sat: SatelliteId, sim_time: float) -> float:
    """Seconds since ``sat`` last crossed the equator northbound."""
    u = float(argument_of_latitude(config, sat.slot, sat.plane, sim_time))
    return u / (2.0 * math.pi) * config.period


def _positions(config: ConstellationConfig, slot, plane, sim_time: float):
    u = argument_of_latitude(config, slot, plane, sim_time)
    raan = 2.0 * np.pi * np.asarray(plane) / config.num_planes
    inc = config.inclination_rad
    r = config.radius_km
    cu, su = np.cos(u), np.sin(u)
    co, so = np.cos(raan), np.sin(raan)
    x_eci = r * (co * cu - so * su * math.cos(inc))
    y_eci = r * (so * cu + co * su * math.cos(inc))
    z = r * su * math.sin(inc)
    # ECI -> ECEF: rotate by Earth's angle since epoch (GMST = 0 at epoch)
    gst = OMEGA_EARTH * (sim_time - config.epoch)
    cg, sg = math.cos(gst), math.sin(gst)
    x = cg * x_eci + sg * y_eci
    y = -sg * x_eci + cg * y_eci
    lat = np.degrees(np.arcsin(np.clip(z / r, -1.0, 1.0)))
    lon = np.degrees(np.arctan2(y, x))
    # d(lat)/dt has the sign of d(sin u)/dt = cos(u) * du/dt
    ascending = cu > 0.0
    return u, x, y, z, lat, lon, ascending


def satellite_state(
    config: ConstellationConfig, sat: SatelliteId, sim_time: float
) -> SatelliteState:
    sat = SatelliteId(*sat)
    if not (0 <= sat.slot < config.sats_per_plane and 0 <= sat.plane < config.num_planes):
        raise DomainError(f"satellite {sat} outside a {config.num_planes}x{config.sats_per_plane} shell")
    u, x, y, z, lat, lon, asc = _positions(config, sat.slot, sat.plane, sim_time)
    return SatelliteState(
        id=sat,
        phase_time=float(u) / (2.0 * math.pi) * config.period,
        ecef=(float(x), float(y), float(z)),
        geodetic=(float(lat), float(lon), config.altitude_km),
        ascending=bool(asc),
    )


@dataclass(frozen=True)
class ShellSnapshot:
    """Vectorised subpoints of every satellite at one instant.

    Arrays are indexed ``[plane, slot]``.
    """

    config: ConstellationConfig
    sim_time: float
    latitude: np.ndarray
    longitude: np.ndarray
    ascending: np.ndarray
    ecef: np.ndarray  # [plane, slot, xyz] km

    @classmethod
    def at(cls, config: ConstellationConfig, sim_time: float) -> ShellSnapshot:
        plane, slot = np.meshgrid(
            np.arange(config.num_planes), np.arange(config.sats_per_plane), indexing="ij"
        )
        _, x, y, z, lat, lon, asc = _positions(config, slot, plane, sim_time)
        return cls(config, sim_time, lat, lon, asc, np.stack([x, y, z], axis=-1))
