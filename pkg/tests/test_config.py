"""Run configuration validation."""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from laurentkit.config import DEFAULT_WINDOWS, Config
from laurentkit.errors import ConfigError


def test_defaults():
    cfg = Config.from_json({})
    assert cfg == Config()
    assert cfg.windows == DEFAULT_WINDOWS


@given(st.integers(), st.lists(st.integers(1, 50), min_size=1, max_size=5), st.integers(1, 500))
def test_valid_configs_round_trip(seed, windows, nmax):
    cfg = Config.from_json({"seed": seed, "windows": windows, "nmax": nmax})
    assert (cfg.seed, cfg.windows, cfg.nmax) == (seed, tuple(windows), nmax)


@pytest.mark.parametrize(
    "data,location",
    [
        ([1, 2], "cfg"),
        ({"seed": "7"}, "cfg.seed"),
        ({"seed": True}, "cfg.seed"),
        ({"windows": 3}, "cfg.windows"),
        ({"windows": [1, 0]}, "cfg.windows[1]"),
        ({"windows": [2, "x"]}, "cfg.windows[1]"),
        ({"nmax": 0}, "cfg.nmax"),
        ({"nmax": 2.5}, "cfg.nmax"),
        ({"extra": 1}, "cfg"),
    ],
)
def test_invalid_configs_name_the_field(data, location):
    with pytest.raises(ConfigError) as info:
        Config.from_json(data, "cfg")
    assert info.value.location == location


def test_direct_construction_is_validated():
    with pytest.raises(ConfigError):
        Config(windows=())
    with pytest.raises(ConfigError):
        Config(nmax=0)
