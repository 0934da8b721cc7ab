"""
JSON run configuration.

Every section and key is optional; missing values take the defaults
below (altitude 530 km, inclination 87 deg, 10 GHz / 5 W / 62.5 dBi /
300 K / 1550 nm links, 10 GB per collect task, F_M = 1, F_R = 5,
m_p = r_p = 1, 3 per hop).  Unknown keys are rejected so typos surface.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .constellation import ConstellationConfig
from .errors import ConfigError, DomainError
from .geo import Direction, GeoBoundingBox, load_ground_stations
from .linkmodel import CostParams, LinkParams
from .scheduler import JobSpec
from .simharness import DEFAULT_FR_FACTORS, DEFAULT_SHELLS, ExperimentConfig

SCHEMA = {
    "seed": int,
    "ground_stations": str,
    "constellation": {
        "num_planes": int,
        "sats_per_plane": int,
        "altitude_km": float,
        "inclination_deg": float,
        "phase_offset": int,
    },
    "link": {
        "bandwidth_hz": float,
        "tx_power_w": float,
        "gain_tx_dbi": float,
        "gain_rx_dbi": float,
        "noise_temp_k": float,
        "wavelength_m": float,
    },
    "job": {
        "aoi": {"upper_left": list, "lower_right": list},
        "data_volume_bytes": float,
        "map_compress": float,
        "reduce_compress": float,
        "map_factor": float,
        "reduce_factor": float,
        "norm_constant": float,
        "hop_overhead": float,
        "direction": str,
        "fraction": float,
    },
    "experiment": {
        "shell_sweep": list,
        "inclinations": list,
        "routing_inclinations": list,
        "runs": int,
        "route_pairs": int,
        "fr_factors": list,
        "workers": int,
    },
}


@dataclass
class Settings:
    constellation: ConstellationConfig = field(default_factory=lambda: ConstellationConfig(50, 20))
    link: LinkParams = field(default_factory=LinkParams)
    job: JobSpec = field(default_factory=JobSpec)
    experiment: dict = field(default_factory=dict)
    seed: int = 0
    ground_stations: str | None = None

    def experiment_config(self, runs: int | None = None) -> ExperimentConfig:
        exp = dict(self.experiment)
        if runs is not None:
            exp["runs"] = runs
        stations = tuple(load_ground_stations(self.ground_stations, min_population=1_000_000))
        return ExperimentConfig(
            shell_sweep=tuple(tuple(s) for s in exp.get("shell_sweep", DEFAULT_SHELLS)),
            inclinations=tuple(exp.get("inclinations", (self.constellation.inclination_deg,))),
            routing_inclinations=tuple(exp.get("routing_inclinations", (53.0, 87.0))),
            altitude_km=self.constellation.altitude_km,
            phase_offset=self.constellation.phase_offset,
            runs=exp.get("runs", 20),
            base_seed=self.seed,
            job_template=self.job,
            link=self.link,
            stations=stations,
            route_pairs=exp.get("route_pairs", 1000),
            fr_factors=tuple(exp.get("fr_factors", DEFAULT_FR_FACTORS)),
            workers=exp.get("workers", 1),
        )


def _line_of(text: str, path: str) -> int | None:
    """Best-effort line number of the last key in a dotted path."""
    pos = 0
    for part in path.split("."):
        m = re.compile(r'"%s"\s*:' % re.escape(part)).search(text, pos)
        if not m:
            return None
        pos = m.start()
    return text.count("\n", 0, pos) + 1


def _fail(source: str, text: str, path: str, message: str):
    line = _line_of(text, path) if path else None
    where = f"{source}:{line}" if line else source
    raise ConfigError(f"{where}: {path or '<root>'}: {message}")


def _check_types(data, schema, prefix, source, text):
    if not isinstance(data, dict):
        _fail(source, text, prefix, "expected an object")
    for key, value in data.items():
        path = f"{prefix}.{key}" if prefix else key
        if key not in schema:
            _fail(source, text, path, f"unknown key (allowed: {', '.join(schema)})")
        want = schema[key]
        if isinstance(want, dict):
            _check_types(value, want, path, source, text)
        elif want is float:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                _fail(source, text, path, f"expected a number, got {value!r}")
        elif want is int:
            if isinstance(value, bool) or not isinstance(value, int):
                _fail(source, text, path, f"expected an integer, got {value!r}")
        elif not isinstance(value, want):
            _fail(source, text, path, f"expected {want.__name__}, got {value!r}")


def parse_settings(text: str, source: str = "<config>") -> Settings:
    if not text.strip():
        return Settings()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    _check_types(data, SCHEMA, "", source, text)

    section = "constellation"
    try:
        c = data.get("constellation", {})
        constellation = ConstellationConfig(
            num_planes=c.get("num_planes", 50),
            sats_per_plane=c.get("sats_per_plane", 20),
            altitude_km=float(c.get("altitude_km", 530.0)),
            inclination_deg=float(c.get("inclination_deg", 87.0)),
            phase_offset=c.get("phase_offset", 0),
        )
        section = "link"
        link = LinkParams(**{k: float(v) for k, v in data.get("link", {}).items()})
        section = "job"
        j = data.get("job", {})
        aoi = j.get("aoi", {})
        cost = CostParams(
            map_factor=j.get("map_factor", 1.0),
            reduce_factor=j.get("reduce_factor", 1.0),
            norm_constant=j.get("norm_constant", 1.0),
            hop_overhead=j.get("hop_overhead", 3.0),
            data_volume=float(j.get("data_volume_bytes", 10e9)),
        )
        job = JobSpec(
            aoi=GeoBoundingBox(
                tuple(aoi.get("upper_left", (49.0, -125.0))),
                tuple(aoi.get("lower_right", (24.0, -66.0))),
            ),
            map_compress=j.get("map_compress", 1.0),
            reduce_compress=j.get("reduce_compress", 5.0),
            cost_params=cost,
            direction=Direction(j.get("direction", "ascending")),
            fraction=j.get("fraction", 0.2),
        )
        section = "experiment"
        exp = data.get("experiment", {})
        if exp.get("runs", 1) < 1:
            raise ConfigError("runs must be >= 1")
        for pair in exp.get("shell_sweep", []):
            if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, int) for x in pair)):
                raise ConfigError(f"shell_sweep entries must be [planes, sats_per_plane], got {pair!r}")
            ConstellationConfig(pair[0], pair[1], constellation.altitude_km, constellation.inclination_deg)
    except (ConfigError, DomainError, ValueError, TypeError) as exc:
        field_name = _field_in(str(exc))
        path = f"{section}.{field_name}" if field_name else section
        _fail(source, text, path, str(exc))

    return Settings(
        constellation=constellation,
        link=link,
        job=job,
        experiment=exp,
        seed=data.get("seed", 0),
        ground_stations=data.get("ground_stations"),
    )


def _field_in(message: str) -> str | None:
    m = re.match(r"([a-z_]+) must", message)
    return m.group(1) if m else None


def load_settings(path: str | Path | None) -> Settings:
    if path is None:
        return Settings()
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    return parse_settings(text, str(path))
