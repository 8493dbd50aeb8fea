"""Run configuration documents.

A configuration is a JSON document whose sections are all optional;
missing keys take the defaults of :data:`DEFAULTS`, which reproduce the
golden mean experiment with the ArctanIntro family.

Example::

    {
        "family": {"kind": "ArctanQuarterPi", "alpha": 100},
        "strip": {"e_minus": 0, "r": 6, "c_minus": 0.4, "p": 10, "s": 8, "S": 6},
        "grids": {"G": 4096, "N": 2000}
    }
"""
# Standard imports
from dataclasses import dataclass
import copy
import json
import math
import os

# Custom imports
from schema import Schema, And, Or, Use, Optional, SchemaError

from qpfmaps.core.errors import ConfigurationError
from qpfmaps.core.familyfactory import create_family
from qpfmaps.core.family import Strip
from qpfmaps.core.schedule import Schedule
from qpfmaps.core.torus import RotationSpec
from qpfmaps.commons import (
    GOLDEN_MEAN,
    DEFAULT_G,
    DEFAULT_N,
    DEFAULT_N_MAX,
    DEFAULT_THETA_GRID,
    DEFAULT_X_GRID,
    DEFAULT_BETA_GRID,
    DEFAULT_CHECK_HORIZON,
    LYAPUNOV_DELTA,
)
import qpfmaps.commons as cm

LOGGER = cm.logger()

DEFAULT_CONFIG = "figure1"

DEFAULTS = {
    "family": {"kind": "ArctanIntro", "alpha": 100.0, "extra": {}},
    "strip": {
        "e_minus": 0.0,
        "r": 10.0,
        "c_minus": 0.5,
        "c_plus": math.pi / 2.0,
        "p": 3.0,
        "s": 5.0,
        "S": 7.0,
    },
    "rotation": {
        "omega": "golden",
        "dio_C": 0.38,
        "dio_eta": 1.0,
        "check_horizon": DEFAULT_CHECK_HORIZON,
    },
    "schedule": {"M0": 4, "K0": 32, "kappa": 2, "n_max": 3},
    "grids": {
        "G": DEFAULT_G,
        "N": DEFAULT_N,
        "N_max": DEFAULT_N_MAX,
        "theta": DEFAULT_THETA_GRID,
        "x": DEFAULT_X_GRID,
        "beta": DEFAULT_BETA_GRID,
        "refine": 1,
    },
    "tolerances": {
        "beta_tol": 1e-5,
        "delta": LYAPUNOV_DELTA,
        "eps_pinch": None,
        "delta_probe": None,
    },
    "output": {"out": ".", "timestamp": True, "png": False},
    "sweep": {"start": 0.0, "stop": 0.8, "num": 9},
    "beta": 0.7769,
}

NUMBER = And(Or(int, float), Use(float))
POSITIVE = And(Or(int, float), lambda v: v > 0, Use(float))
COUNT = And(int, lambda v: v >= 1)
MAYBE_POSITIVE = Or(None, POSITIVE)

CONFIG_SCHEMA = Schema(
    {
        Optional("name"): str,
        Optional("description"): str,
        "family": {
            "kind": str,
            "alpha": POSITIVE,
            "extra": dict,
        },
        "strip": {
            "e_minus": NUMBER,
            Optional("e_plus"): NUMBER,
            Optional("r"): POSITIVE,
            "c_minus": NUMBER,
            "c_plus": NUMBER,
            "p": POSITIVE,
            "s": POSITIVE,
            "S": POSITIVE,
        },
        "rotation": {
            "omega": Or("golden", And(NUMBER, lambda v: 0 < v < 1)),
            "dio_C": POSITIVE,
            "dio_eta": POSITIVE,
            "check_horizon": COUNT,
        },
        "schedule": {
            "M0": And(int, lambda v: v >= 2),
            "K0": And(int, lambda v: v >= 2),
            "kappa": And(int, lambda v: v >= 2),
            "n_max": And(int, lambda v: v >= 0),
        },
        "grids": {
            "G": And(int, lambda v: v >= 2),
            "N": And(int, lambda v: v >= 0),
            "N_max": COUNT,
            "theta": COUNT,
            "x": COUNT,
            "beta": COUNT,
            "refine": And(int, lambda v: v >= 0),
        },
        "tolerances": {
            "beta_tol": POSITIVE,
            "delta": POSITIVE,
            "eps_pinch": MAYBE_POSITIVE,
            "delta_probe": MAYBE_POSITIVE,
        },
        "output": {"out": str, "timestamp": bool, "png": bool},
        "sweep": {"start": NUMBER, "stop": NUMBER, "num": COUNT},
        "beta": NUMBER,
    }
)


def merge(defaults: dict, document: dict) -> dict:
    """Recursively overlay ``document`` on a copy of ``defaults``"""
    out = copy.deepcopy(defaults)
    for key, value in document.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict) and key != "extra":
            out[key] = merge(out[key], value)
        else:
            out[key] = value
    return out


@dataclass
class RunConfig:
    """Validated run configuration with the objects it describes"""

    document: dict
    family: object
    strip: Strip
    rotation: RotationSpec

    @property
    def grids(self) -> dict:
        return self.document["grids"]

    @property
    def tolerances(self) -> dict:
        return self.document["tolerances"]

    @property
    def output(self) -> dict:
        return self.document["output"]

    @property
    def sweep(self) -> dict:
        return self.document["sweep"]

    @property
    def beta(self) -> float:
        return self.document["beta"]

    @property
    def n_max(self) -> int:
        return self.document["schedule"]["n_max"]

    @property
    def name(self) -> str:
        return self.document.get("name", "run")

    def make_schedule(self) -> Schedule:
        """Return a fresh schedule; the region induction extends it in place"""
        spec = self.document["schedule"]
        return Schedule(M=[spec["M0"]], K0=spec["K0"], kappa=spec["kappa"])


def parse_config(document: dict) -> RunConfig:
    """Validate a configuration document and build its objects

    Raises:
        ConfigurationError: schema violation or invalid strip, naming the
            violated assumption when there is one
    """
    if not isinstance(document, dict):
        raise ConfigurationError("configuration must be a JSON object")
    try:
        document = CONFIG_SCHEMA.validate(merge(DEFAULTS, document))
    except SchemaError as e:
        raise ConfigurationError(f"invalid configuration: {e.code}")

    rot = document["rotation"]
    omega = GOLDEN_MEAN if rot["omega"] == "golden" else rot["omega"]
    rotation = RotationSpec(omega, rot["dio_C"], rot["dio_eta"], rot["check_horizon"])

    family = create_family(document["family"], omega)
    strip_spec = dict(document["strip"])
    if "e_plus" in strip_spec:
        strip_spec.pop("r", None)
    strip = Strip.from_dict(strip_spec, family.alpha).validate()
    return RunConfig(document, family, strip, rotation)


def load_config(source=None, beta=None, out=None, timestamp=None) -> RunConfig:
    """Load a configuration by path or by packaged name and apply overrides

    Args:
        source (str): a JSON file path or the name of a packaged
            configuration (see ``qpfmaps-cli configs``); default "figure1"

    Raises:
        ConfigurationError: unreadable file, malformed JSON or invalid content
    """
    source = source or DEFAULT_CONFIG
    packaged = cm.packaged_configs()
    path = source if os.path.exists(source) else packaged.get(source)
    if path is None:
        raise ConfigurationError(
            f"no configuration file or packaged configuration named '{source}'"
        )
    try:
        with open(path, encoding="utf-8") as file:
            document = json.load(file)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"malformed JSON in {path}: {e}")
    except OSError as e:
        raise ConfigurationError(f"cannot read {path}: {e}")

    if isinstance(document, dict):
        if beta is not None:
            document["beta"] = beta
        output = document.setdefault("output", {})
        if isinstance(output, dict):
            if out is not None:
                output["out"] = out
            if timestamp is not None:
                output["timestamp"] = timestamp

    LOGGER.debug("load_config: %s", path)
    return parse_config(document)
