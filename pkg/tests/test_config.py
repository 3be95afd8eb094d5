import json

import pytest

from vanet_magent.config import ScenarioConfig, config_from_dict, loads_config, parse_config
from vanet_magent.errors import ConfigNotFound, ParseError, ValidationError


def test_empty_file_gives_defaults(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("")
    cfg = parse_config(p)
    assert cfg == ScenarioConfig()
    assert (cfg.seed, cfg.grid.rows, cfg.vehicles.count, cfg.discovery.hop_budget) == (1, 5, 30, 5)


def test_empty_object_gives_defaults():
    assert loads_config("{}") == ScenarioConfig()


def test_missing_file(tmp_path):
    with pytest.raises(ConfigNotFound):
        parse_config(tmp_path / "nope.json")


def test_speed_range_names_both_keys():
    with pytest.raises(ValidationError) as e:
        loads_config('{"vehicles": {"speed_mps": {"min": 20, "max": 5}}}')
    text = str(e.value)
    assert "vehicles.speed_mps.min" in text and "vehicles.speed_mps.max" in text


def test_unknown_key_rejected():
    with pytest.raises(ValidationError) as e:
        loads_config('{"grid": {"rows": 3, "colz": 4}}')
    assert "grid.colz" in str(e.value)


def test_all_problems_reported_together():
    with pytest.raises(ValidationError) as e:
        config_from_dict({"seed": -1, "radio": {"range_m": 0}, "discovery": {"hop_budget": 0}})
    assert len(e.value.problems) == 3


def test_strict_types():
    with pytest.raises(ValidationError):
        loads_config('{"grid": {"rows": "5"}}')


def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        loads_config('{\n  "seed": 3,\n  "grid": {rows: 2}\n}')
    assert e.value.line == 3 and e.value.column > 1


def test_non_object_top_level():
    with pytest.raises(ParseError):
        loads_config("[1, 2]")


@pytest.mark.parametrize("data", [
    {"grid": {"rows": 1, "cols": 1}},
    {"dfa": {"placement": "every:0"}},
    {"dfa": {"placement": [0, 0]}},
    {"dfa": {"placement": [99]}},
    {"alerts": [{"time_ms": 0, "origin": "v99", "category": "jam"}]},
    {"queries": [{"time_ms": 0, "origin": "v0", "key": "x"}]},
    {"info": {"d42": ["x"]}},
    {"bench": {"tasks": [{"n": 2, "k": 3}]}},
    {"nodes": {"load_fraction": {"min": 0.6, "max": 0.2}}},
])
def test_cross_field_checks(data):
    with pytest.raises(ValidationError):
        config_from_dict(data)


def test_round_trip():
    cfg = config_from_dict({
        "seed": 9, "grid": {"rows": 3, "cols": 4, "block_m": 120.5}, "dfa": {"placement": [0, 5, 11]},
        "nodes": {"bandwidth_kbps": 3000, "loss_rate": {"dfa": 0.0, "vehicle": 0.05}},
        "alerts": [{"time_ms": 100, "origin": "d1", "category": "accident", "hop_budget": 4}],
        "queries": [{"time_ms": 200, "origin": "d0", "key": "traffic:d2", "qos": {"min_bandwidth_kbps": 10}}],
        "info": {"d2": ["parking"]}, "algorithms": {"fpa_dfa_check_first": True},
    })
    again = loads_config(cfg.to_json())
    assert again == cfg
    assert again.to_json() == cfg.to_json()
    assert json.loads(cfg.to_json())["grid"]["block_m"] == 120.5
