# Standard imports
from logging.handlers import RotatingFileHandler
import logging
import datetime as dt
import re
import math
import tempfile
import os
from pkg_resources import resource_filename


# Numerics
GOLDEN_MEAN = (math.sqrt(5.0) - 1.0) / 2.0
# Orbits dropping below e- by more than this are flagged as escaped
ESCAPE_EPSILON = 1e-9
# Default grid resolutions
DEFAULT_G = 2 ** 14
DEFAULT_N = 10_000
DEFAULT_N_MAX = 100_000
DEFAULT_THETA_GRID = 2048
DEFAULT_X_GRID = 512
DEFAULT_BETA_GRID = 64
REGION_GRID = 4096
BISECTION_TOL = 1e-12
DEFAULT_CHECK_HORIZON = 10 ** 6

# Classifier thresholds
LYAPUNOV_DELTA = 0.05
PINCH_EPSILON_FACTOR = 1e-3
PROBE_FACTOR = 1e-4

# Csv
SWEEP_HEADER = ["beta", "lyap_plus", "lyap_minus", "min_gap", "escaped"]
GRAPH_HEADER = ["theta", "value"]

# Paths
DIR_LOGS = tempfile.gettempdir() + "/"
DIR_ASSETS = resource_filename(__name__, "assets/")  # current package name
DIR_CONFIGS = DIR_ASSETS + "configs/"

# Logging
LOGGER_NAME = "qpfmaps"
LOG_LEVEL = "INFO"
LOG_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
    "critical": logging.CRITICAL,
    "notset": logging.NOTSET,
}

################################################################################


LOG_FORMAT = "%(levelname)s: [%(filename)s:%(lineno)s:%(funcName)s()] %(message)s"


def logger(name=LOGGER_NAME):
    """Return the package logger; console output uses LOG_FORMAT"""
    logging.basicConfig(format=LOG_FORMAT)
    return logging.getLogger(name)


_logger = logging.getLogger(LOGGER_NAME)
_logger.setLevel(LOG_LEVEL)

# One log file per run, kept next to the other temporary files
LOG_FILE = DIR_LOGS + "%s_%s.log" % (LOGGER_NAME, dt.datetime.now().strftime("%Y-%m-%d_%H-%M-%S"))
_file_handler = RotatingFileHandler(LOG_FILE, mode="a", maxBytes=100_000_000, backupCount=1)
_file_handler.setLevel(LOG_LEVEL)
_file_handler.setFormatter(logging.Formatter("%(asctime)s :: %(name)s :: %(levelname)s :: %(message)s"))
_logger.addHandler(_file_handler)


def log_level(level: str):
    """Set the level of the package logger and of its console and file handlers

    Handlers only see the records the logger lets through, so both are set.
    """
    level = level.upper()
    _logger.setLevel(level)
    for handler in _logger.handlers:
        if isinstance(handler, (logging.StreamHandler, RotatingFileHandler)):
            handler.setLevel(level)


def camel_to_snake(name: str) -> str:
    """Convert CamelCase to snake_case name

    Args:
        name (str): a camel string like : ArctanQuarterPi

    Returns:
        str: a snake string like: arctan_quarter_pi
    """
    name = re.sub("(.)([A-Z][a-z]+)", r"\1_\2", name)
    return re.sub("([a-z0-9])([A-Z])", r"\1_\2", name).lower()


def packaged_configs() -> dict:
    """Return the configuration documents shipped with the package

    Returns:
        dict: name (file stem) => absolute path
    """
    if not os.path.isdir(DIR_CONFIGS):
        return {}
    return {
        os.path.splitext(name)[0]: DIR_CONFIGS + name
        for name in sorted(os.listdir(DIR_CONFIGS))
        if name.endswith(".json")
    }
