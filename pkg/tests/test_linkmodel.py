import math

import pytest
from hypothesis import given, settings, strategies as st

from leomr.errors import DomainError, LinkInfeasibleError
from leomr.linkmodel import (
    CostParams,
    LinkParams,
    capacity,
    fspl,
    placement_cost,
    snr,
    transfer_cost,
    transmission_time,
)

# 40-digit mpmath evaluations with the default optical link budget
FSPL_1000KM = 6.5728895074892711e25  # 258.17756 dB
NOISE_W = 4.141947e-11
SNR_1000KM = 0.005807766338288439
S_1000KM_EMPTY = 0.0033356409519815205
S_1000KM_10GB = 957.5598429894481


def test_fspl_at_1000km():
    assert fspl(1e6, 1550e-9) == pytest.approx(FSPL_1000KM, rel=1e-12)
    assert 10 * math.log10(fspl(1e6, 1550e-9)) == pytest.approx(258.18, abs=0.01)


@pytest.mark.parametrize("d,lam", [(0.0, 1550e-9), (-1.0, 1550e-9), (1e6, 0.0)])
def test_fspl_domain(d, lam):
    with pytest.raises(DomainError):
        fspl(d, lam)


def test_noise_power():
    assert LinkParams().noise_power_w == pytest.approx(NOISE_W, rel=1e-6)


def test_snr_at_1000km():
    assert snr(1e6) == pytest.approx(SNR_1000KM, rel=1e-12)


def test_capacity_matches_shannon():
    assert capacity(1e6) == pytest.approx(10e9 * math.log2(1 + SNR_1000KM), rel=1e-12)


def test_transmission_examples():
    assert transmission_time(1e6, 0.0) == pytest.approx(S_1000KM_EMPTY, rel=1e-12)
    assert transmission_time(1e6, 10e9) == pytest.approx(S_1000KM_10GB, rel=1e-12)


def test_tiny_capacity_is_still_finite():
    assert math.isfinite(transmission_time(1e40, 10e9))  # capacity ~1e-60 bit/s


def test_overflowing_path_loss_is_infeasible():
    with pytest.raises(LinkInfeasibleError):
        transmission_time(1e200, 10e9)


def test_negative_volume():
    with pytest.raises(DomainError):
        transmission_time(1e6, -1.0)


@settings(max_examples=200)
@given(d1=st.floats(1e4, 5e6), d2=st.floats(1e4, 5e6), v=st.floats(1.0, 1e11))
def test_transmission_monotone(d1, d2, v):
    lo, hi = sorted((d1, d2))
    assert transmission_time(lo, v) <= transmission_time(hi, v)
    assert transmission_time(lo, v) <= transmission_time(lo, v * 2)


@settings(max_examples=100)
@given(d=st.floats(2e5, 5e6))
def test_low_snr_regime_is_quadratic(d):
    # serialisation time scales with d^2 when SNR << 1
    ratio = (transmission_time(2 * d, 10e9) - 2 * d / 2.99792458e8) / (
        transmission_time(d, 10e9) - d / 2.99792458e8
    )
    assert ratio == pytest.approx(4.0, rel=0.05)


def test_placement_single_hop_empty():
    assert placement_cost([1e6], 0.0) == pytest.approx(4.003335640951982, rel=1e-12)


def test_placement_local_is_processing_only():
    assert placement_cost([], 10e9, CostParams(map_factor=2.5, norm_constant=4.0)) == 10.0


def test_store_and_forward_sums_links():
    d = [2.159e6, 8.6e5, 4.5e4]
    expected = 1.0 + 3 * 3.0 + sum(transmission_time(x, 10e9) for x in d)
    assert placement_cost(d, 10e9) == pytest.approx(expected, rel=1e-12)


def test_split_link_is_cheaper_than_one_long_link():
    # two 500 km hops beat one 1000 km hop despite the extra hop overhead
    assert placement_cost([5e5, 5e5], 10e9) < placement_cost([1e6], 10e9)


def test_transfer_cost_drops_processing():
    cp = CostParams(map_factor=7.0)
    assert placement_cost([1e6], 1e9, cp) - transfer_cost([1e6], 1e9, cp) == pytest.approx(7.0)


@pytest.mark.parametrize("field", ["bandwidth_hz", "tx_power_w", "wavelength_m", "noise_temp_k"])
def test_link_params_positive(field):
    with pytest.raises(DomainError):
        LinkParams(**{field: 0.0})


def test_cost_params_nonnegative():
    with pytest.raises(DomainError):
        CostParams(hop_overhead=-1.0)
