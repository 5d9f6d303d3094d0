"""Tests for RunConfig."""

import pytest

from khcube.core.config import RunConfig, set_config
from khcube.core.khcomplex import DECREASING, INCREASING
from khcube.homalg.rings import INTEGERS, Ring


def test_defaults():
    config = RunConfig()
    assert config.ring_tag() == INTEGERS
    assert config.variant == "unreduced"
    assert config.full_direction == INCREASING
    assert config.to_dict() == {
        "ring": "Z",
        "variant": "unreduced",
        "signs": "tilde_delta",
        "direction": "increasing",
    }


def test_set_config():
    config = set_config(ring="F2", reduced=True, direction="dec", threads=4)
    assert config.variant == "reduced"
    assert config.ring_tag() == Ring("Fp", 2)
    assert config.full_direction == DECREASING
    assert config.sign_rule().variant == "tilde_delta"
    assert set_config(signs="delta").sign_rule().variant == "delta"


@pytest.mark.parametrize(
    "kwargs",
    [
        {"subcommand": "knot"},
        {"ring": "Z4"},
        {"ring": "Fp=4"},
        {"variant": "odd"},
        {"signs": "both"},
        {"direction": "sideways"},
        {"threads": 0},
        {"max_crossings": 0},
    ],
)
def test_invalid_values(kwargs):
    with pytest.raises(ValueError):
        RunConfig(**kwargs)


def test_json_round_trip(tmp_path):
    config = set_config(subcommand="khr", ring="Q", reduced=True, output="out.json")
    path = config.to_json(tmp_path / "config.json")
    assert RunConfig.from_json(path) == config
