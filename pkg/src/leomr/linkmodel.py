"""
Optical ISL cost model: free-space path loss, SNR, Shannon-capacity
transfer time and the per-placement cost of a task.

Distances here are in metres and volumes in bytes (1 GB = 1e9 bytes).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import DomainError, LinkInfeasibleError

BOLTZMANN = 1.380649e-23  # J/K
LIGHTSPEED = 2.99792458e8  # m/s


@dataclass(frozen=True)
class LinkParams:
    bandwidth_hz: float = 10e9
    tx_power_w: float = 5.0
    gain_tx_dbi: float = 62.5
    gain_rx_dbi: float = 62.5
    noise_temp_k: float = 300.0
    wavelength_m: float = 1550e-9
    boltzmann: float = BOLTZMANN
    lightspeed: float = LIGHTSPEED

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise DomainError(f"{name} must be positive, got {value}")

    @property
    def noise_power_w(self) -> float:
        return self.boltzmann * self.noise_temp_k * self.bandwidth_hz


@dataclass(frozen=True)
class CostParams:
    """Terms of the placement cost.

    ``norm_constant`` converts processing factors to seconds; with equal
    factors on every node it only adds a constant offset.
    """

    map_factor: float = 1.0
    reduce_factor: float = 1.0
    norm_constant: float = 1.0
    hop_overhead: float = 3.0
    data_volume: float = 10e9  # bytes

    def __post_init__(self):
        for name, value in vars(self).items():
            if value < 0:
                raise DomainError(f"{name} must be >= 0, got {value}")


def fspl(d: float, wavelength: float) -> float:
    """Free-space path loss (4 pi d / lambda)^2 as a linear ratio."""
    if d <= 0 or wavelength <= 0:
        raise DomainError(f"path loss needs d > 0 and wavelength > 0, got d={d}, wavelength={wavelength}")
    ratio = 4.0 * math.pi * d / wavelength
    return ratio * ratio  # overflows to inf rather than raising


def snr(d: float, params: LinkParams = LinkParams()) -> float:
    g_t = 10.0 ** (params.gain_tx_dbi / 10.0)
    g_r = 10.0 ** (params.gain_rx_dbi / 10.0)
    return params.tx_power_w * g_t * g_r / (params.noise_power_w * fspl(d, params.wavelength_m))


def capacity(d: float, params: LinkParams = LinkParams()) -> float:
    """Shannon capacity in bit/s."""
    # log1p keeps precision in the low-SNR regime these links operate in
    return params.bandwidth_hz * math.log1p(snr(d, params)) / math.log(2.0)


def transmission_time(d: float, volume: float, params: LinkParams = LinkParams()) -> float:
    """Propagation delay plus serialisation time of ``volume`` bytes over one link."""
    if volume < 0:
        raise DomainError(f"volume must be >= 0, got {volume}")
    delay = d / params.lightspeed
    if d <= 0:
        raise DomainError(f"link distance must be positive, got {d}")
    if volume == 0:
        return delay
    cap = capacity(d, params)
    if cap <= 0.0 or not math.isfinite(volume * 8.0 / cap):
        raise LinkInfeasibleError(f"capacity underflows at {d:.3e} m")
    return delay + volume * 8.0 / cap


def placement_cost(
    link_distances: Iterable[float],
    volume: float,
    cost_params: CostParams = CostParams(),
    link_params: LinkParams = LinkParams(),
    processing_factor: float | None = None,
) -> float:
    """Processing + per-hop overhead + store-and-forward transfer over each link.

    ``link_distances`` are the individual hop lengths in metres; an empty
    sequence means the task runs where its data already is.
    """
    factor = cost_params.map_factor if processing_factor is None else processing_factor
    links = list(link_distances)
    transfer = math.fsum(transmission_time(d, volume, link_params) for d in links)
    return factor * cost_params.norm_constant + len(links) * cost_params.hop_overhead + transfer


def transfer_cost(
    link_distances: Iterable[float],
    volume: float,
    cost_params: CostParams = CostParams(),
    link_params: LinkParams = LinkParams(),
) -> float:
    """Hop overheads plus transfer time, without any processing term."""
    return placement_cost(link_distances, volume, cost_params, link_params, processing_factor=0.0)
