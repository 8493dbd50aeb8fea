import json
import os
import tempfile

import pytest

from qpfmaps.core.config import DEFAULTS, load_config, merge, parse_config
from qpfmaps.core.errors import ConfigurationError
from qpfmaps.commons import GOLDEN_MEAN, packaged_configs
from tests import utils


def test_merge():
    defaults = {"a": 1, "b": {"c": 2, "d": 3}, "extra": {"x": 1}}
    merged = merge(defaults, {"b": {"c": 5}, "extra": {"y": 2}, "e": 4})

    assert merged == {"a": 1, "b": {"c": 5, "d": 3}, "extra": {"y": 2}, "e": 4}
    # defaults are left untouched
    assert defaults["b"]["c"] == 2


def test_empty_document_gives_defaults():
    config = parse_config({})

    assert config.name == "run"
    assert config.family.kind == "ArctanIntro"
    assert config.family.alpha == 100
    assert config.strip.e_plus == pytest.approx(0.1)
    assert config.rotation.omega == GOLDEN_MEAN
    assert config.beta == DEFAULTS["beta"]
    assert config.n_max == 3
    assert config.grids["G"] == DEFAULTS["grids"]["G"]


def test_make_schedule():
    config = parse_config({"schedule": {"M0": 8, "K0": 16, "kappa": 3}})
    first = config.make_schedule()
    first.M.append(100)
    second = config.make_schedule()

    assert second.M == [8]
    assert second.K0 == 16
    assert second.kappa == 3


def test_numeric_rotation():
    config = parse_config({"rotation": {"omega": 0.3}})
    assert config.rotation.omega == 0.3
    assert config.family.omega == 0.3


def test_e_plus_wins_over_r():
    config = parse_config({"strip": {"e_plus": 0.05}})
    assert config.strip.e_plus == 0.05


@pytest.mark.parametrize(
    "document",
    [
        {"grids": {"G": 1}},
        {"family": {"alpha": -1}},
        {"schedule": {"kappa": 1}},
        {"rotation": {"omega": 1.5}},
        {"output": {"png": "yes"}},
        {"strip": {"p": "three"}},
        {"unknown": 1},
    ],
)
def test_schema_errors(document):
    with pytest.raises(ConfigurationError):
        parse_config(document)


def test_not_an_object():
    with pytest.raises(ConfigurationError):
        parse_config([1, 2])


def test_unknown_family():
    with pytest.raises(ConfigurationError) as info:
        parse_config({"family": {"kind": "Logistic"}})
    assert "ArctanIntro" in str(info.value)


def test_strip_ordering_names_assumption():
    with pytest.raises(ConfigurationError) as info:
        parse_config({"strip": {"c_minus": 0.05}})
    assert info.value.assumption == "(A1)-(A3)"
    assert str(info.value).startswith("(A1)-(A3)")


@pytest.mark.parametrize("name", ["figure1", "quarter_pi", "quarter_pi_weak", "autonomous_fold"])
def test_packaged_configs(name):
    assert name in packaged_configs()
    config = load_config(name)
    assert config.name == name
    assert config.document["description"]


def test_default_config_is_figure1():
    config = load_config()
    assert config.name == "figure1"
    assert config.strip.c_minus == 0.5
    assert config.n_max == 2


def test_load_from_file():
    directory = tempfile.mkdtemp()
    filename = utils.write_config({"name": "mine", "beta": 0.5, "grids": {"G": 16}}, directory)

    config = load_config(filename)
    assert config.name == "mine"
    assert config.beta == 0.5
    assert config.grids["G"] == 16
    # unspecified grid keys keep their defaults
    assert config.grids["N"] == DEFAULTS["grids"]["N"]


def test_overrides():
    directory = tempfile.mkdtemp()
    config = load_config("quarter_pi", beta=0.5, out=directory, timestamp=False)
    assert config.beta == 0.5
    assert config.output == {"out": directory, "timestamp": False, "png": False}


def test_missing_source():
    with pytest.raises(ConfigurationError):
        load_config("no_such_configuration")


def test_malformed_json():
    _, filename = tempfile.mkstemp(suffix=".json")
    with open(filename, "w") as file:
        file.write('{"beta": 0.5,')
    with pytest.raises(ConfigurationError) as info:
        load_config(filename)
    assert "malformed" in str(info.value)


def test_document_is_not_an_object():
    _, filename = tempfile.mkstemp(suffix=".json")
    with open(filename, "w") as file:
        json.dump([0.5], file)
    with pytest.raises(ConfigurationError):
        load_config(filename, beta=0.3)
    os.remove(filename)
