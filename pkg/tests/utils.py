import json
import math
import tempfile

from qpfmaps.core.family import ArctanIntro, ArctanQuarterPi, Strip


def figure_family():
    return ArctanIntro(alpha=100)


def figure_strip(alpha=100, **kwargs):
    spec = {"e_minus": 0.0, "r": 10, "c_minus": 0.5, "c_plus": math.pi / 2}
    spec.update(kwargs)
    return Strip.from_dict(spec, alpha)


def narrow_family():
    return ArctanIntro(alpha=1e4)


def narrow_strip():
    """Steep strip whose critical region I_0 is short of its third return"""
    return Strip.from_dict(
        {"e_minus": 0.0, "r": 100, "c_minus": 0.05, "c_plus": math.pi / 2}, 1e4
    )


def quarter_pi_family(alpha=100):
    return ArctanQuarterPi(alpha=alpha)


def quarter_pi_strip(alpha=100, **kwargs):
    """Strip of the quarter pi audit: r = 10, c- = 0.5, p = 3"""
    return figure_strip(alpha, **kwargs)


def write_config(document, directory=None):
    """Dump a configuration document into a temporary JSON file"""
    _, filename = tempfile.mkstemp(suffix=".json", dir=directory)
    with open(filename, "w") as file:
        json.dump(document, file)
    return filename
