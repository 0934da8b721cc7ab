import json

import pytest

from leomr.config import load_settings, parse_settings
from leomr.errors import ConfigError


def test_empty_config_gives_defaults():
    s = parse_settings("")
    assert (s.constellation.num_planes, s.constellation.sats_per_plane) == (50, 20)
    assert s.job.reduce_compress == 5.0
    assert s.job.data_volume == 10e9


def test_overrides_are_applied():
    s = parse_settings(
        json.dumps(
            {
                "seed": 7,
                "constellation": {"num_planes": 10, "sats_per_plane": 8, "inclination_deg": 53},
                "job": {"reduce_compress": 10, "aoi": {"upper_left": [10, 0], "lower_right": [0, 10]}},
                "experiment": {"runs": 4, "shell_sweep": [[10, 8]]},
            }
        )
    )
    assert s.seed == 7 and s.constellation.inclination_deg == 53.0
    cfg = s.experiment_config()
    assert cfg.runs == 4 and cfg.shell_sweep == ((10, 8),) and cfg.inclinations == (53.0,)
    assert s.experiment_config(runs=2).runs == 2


def test_unknown_key_reports_line():
    text = '{\n  "constellation": {\n    "num_plane": 10\n  }\n}'
    with pytest.raises(ConfigError, match=r"cfg.json:3: constellation.num_plane: unknown key"):
        parse_settings(text, "cfg.json")


def test_type_error_reports_field():
    with pytest.raises(ConfigError, match=r"link.tx_power_w: expected a number"):
        parse_settings('{"link": {"tx_power_w": "5"}}')


def test_invalid_value_reports_section():
    with pytest.raises(ConfigError, match=r"constellation"):
        parse_settings('{"constellation": {"altitude_km": 100}}')


def test_bad_json_reports_position():
    with pytest.raises(ConfigError, match=r"<config>:1:\d+: invalid JSON"):
        parse_settings("{nope")


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_settings(tmp_path / "absent.json")
