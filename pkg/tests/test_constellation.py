import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from leomr.constellation import (
    MU_EARTH,
    R_EARTH_KM,
    ConstellationConfig,
    SatelliteId,
    argument_of_latitude,
    inter_plane_base_distance,
    inter_plane_distance,
    intra_plane_distance,
    orbital_period,
    satellite_state,
)
from leomr.errors import ConfigError, DomainError

# 40-digit mpmath evaluations, rounded to double
T_530 = 5705.310201626751
T_0 = 5060.840252003522
D_M_20 = 2159.1084864852665
D_BASE_50 = 866.6347505435832


def test_period_at_530km():
    assert orbital_period(530.0) == pytest.approx(T_530, rel=1e-12)
    assert orbital_period(530.0) / 60 == pytest.approx(95.1, abs=0.05)


def test_period_at_surface_is_schuler():
    assert orbital_period(0.0) == pytest.approx(T_0, rel=1e-12)


def test_period_halves_with_four_times_mu():
    assert orbital_period(530.0, mu=4 * MU_EARTH) == pytest.approx(T_530 / 2, rel=1e-12)


@pytest.mark.parametrize("h", [-1.0, -530.0, math.nan])
def test_period_rejects_negative_altitude(h):
    with pytest.raises(DomainError):
        orbital_period(h)


def test_period_increases_with_altitude():
    hs = np.linspace(0, 2000, 400)
    periods = [orbital_period(h) for h in hs]
    assert all(b > a for a, b in zip(periods, periods[1:]))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(num_planes=0, sats_per_plane=20),
        dict(num_planes=50, sats_per_plane=0),
        dict(num_planes=50, sats_per_plane=20, altitude_km=200.0),
        dict(num_planes=50, sats_per_plane=20, altitude_km=2500.0),
        dict(num_planes=50, sats_per_plane=20, inclination_deg=0.0),
        dict(num_planes=50, sats_per_plane=20, inclination_deg=95.0),
        dict(num_planes=50, sats_per_plane=20, phase_offset=50),
    ],
)
def test_config_invariants(kwargs):
    with pytest.raises(ConfigError):
        ConstellationConfig(**kwargs)


def test_satellite_id_wraps():
    cfg = ConstellationConfig(10, 20)
    assert SatelliteId(23, -1).wrap(cfg) == SatelliteId(3, 9)


def test_intra_plane_examples(shell_50x20):
    assert intra_plane_distance(shell_50x20) == pytest.approx(D_M_20, rel=1e-12)
    assert intra_plane_distance(ConstellationConfig(50, 1)) == pytest.approx(0.0, abs=1e-9)
    assert intra_plane_distance(ConstellationConfig(50, 2)) == pytest.approx(2 * 6901.0, rel=1e-12)


def test_intra_plane_independent_of_time(shell_50x20):
    # the API takes no time at all; evaluate repeatedly to pin purity
    values = {intra_plane_distance(shell_50x20) for _ in range(100)}
    assert len(values) == 1


def test_inter_plane_examples(shell_50x20):
    T = shell_50x20.period
    assert inter_plane_base_distance(shell_50x20) == pytest.approx(D_BASE_50, rel=1e-12)
    assert inter_plane_distance(shell_50x20, 0.0) == pytest.approx(D_BASE_50, rel=1e-12)
    assert inter_plane_distance(shell_50x20, T / 4) == pytest.approx(
        D_BASE_50 * 0.05233595624294383, rel=1e-9
    )
    polar = ConstellationConfig(50, 20, inclination_deg=90.0)
    assert inter_plane_distance(polar, polar.period / 4) == pytest.approx(0.0, abs=1e-9)


def test_inter_plane_reduces_time_mod_period(shell_50x20):
    T = shell_50x20.period
    assert inter_plane_distance(shell_50x20, 0.3 * T + 2 * T) == pytest.approx(
        inter_plane_distance(shell_50x20, 0.3 * T), rel=1e-12
    )
    assert inter_plane_distance(shell_50x20, -0.1 * T) == pytest.approx(
        inter_plane_distance(shell_50x20, 0.9 * T), rel=1e-12
    )


@settings(max_examples=300, deadline=None)
@given(inc=st.floats(1.0, 90.0), frac=st.floats(0.0, 0.999999))
def test_inter_plane_bounds(inc, frac):
    cfg = ConstellationConfig(40, 20, inclination_deg=inc)
    d = inter_plane_distance(cfg, frac * cfg.period)
    base = inter_plane_base_distance(cfg)
    lo = base * abs(math.cos(math.radians(inc)))
    assert lo * (1 - 1e-9) - 1e-9 <= d <= base * (1 + 1e-9)


def test_start_of_orbit_is_ascending_equator(shell_50x20):
    s = satellite_state(shell_50x20, SatelliteId(0, 0), 0.0)
    assert s.latitude == pytest.approx(0.0, abs=1e-9)
    assert s.ascending
    half = satellite_state(shell_50x20, SatelliteId(0, 0), shell_50x20.period / 2)
    assert half.latitude == pytest.approx(0.0, abs=1e-9)
    assert not half.ascending


def test_quarter_orbit_peaks_at_inclination(shell_50x20):
    s = satellite_state(shell_50x20, SatelliteId(0, 0), shell_50x20.period / 4)
    assert s.latitude == pytest.approx(87.0, abs=1e-9)


def test_out_of_bounds_satellite(shell_50x20):
    with pytest.raises(DomainError):
        satellite_state(shell_50x20, SatelliteId(20, 0), 0.0)


@settings(max_examples=200, deadline=None)
@given(
    slot=st.integers(0, 19),
    plane=st.integers(0, 49),
    t=st.floats(0, 1e6),
    inc=st.floats(1.0, 90.0),
    f=st.integers(0, 49),
)
def test_state_geometry(slot, plane, t, inc, f):
    cfg = ConstellationConfig(50, 20, inclination_deg=inc, phase_offset=f)
    s = satellite_state(cfg, SatelliteId(slot, plane), t)
    assert np.linalg.norm(s.ecef) == pytest.approx(R_EARTH_KM + 530.0, rel=1e-6)
    assert abs(s.latitude) <= inc + 1e-9
    # spherical trigonometry: sin(lat) = sin(i) sin(u)
    u = float(argument_of_latitude(cfg, slot, plane, t))
    expected = math.degrees(math.asin(math.sin(math.radians(inc)) * math.sin(u)))
    assert s.latitude == pytest.approx(expected, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(slot=st.integers(0, 19), plane=st.integers(0, 49), t=st.floats(0, 1e5))
def test_ascending_flag_matches_latitude_rate(slot, plane, t):
    cfg = ConstellationConfig(50, 20)
    s = satellite_state(cfg, SatelliteId(slot, plane), t)
    dt = 0.5
    before = satellite_state(cfg, SatelliteId(slot, plane), t - dt).latitude
    after = satellite_state(cfg, SatelliteId(slot, plane), t + dt).latitude
    rate = after - before
    if abs(rate) > 1e-6:  # skip the turning points
        assert s.ascending == (rate > 0)


def test_planes_are_evenly_spaced_in_node_longitude():
    cfg = ConstellationConfig(8, 10)
    # at t=0 slot-0 satellites sit on their ascending nodes
    lons = [satellite_state(cfg, SatelliteId(0, o), 0.0).longitude for o in range(8)]
    gaps = np.diff(np.unwrap(np.radians(lons)))
    assert np.allclose(np.degrees(gaps), 45.0)
