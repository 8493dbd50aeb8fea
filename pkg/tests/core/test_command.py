# Standard imports
import csv
import json
import os
import tempfile

import pytest

# Custom imports
from qpfmaps.core import command
from qpfmaps.core.bifurcation import SMOOTH
from qpfmaps.core.config import load_config
from qpfmaps.core.writer import read_binary_graph


def small_config(name, **grids):
    """Packaged configuration writing into a fresh directory, on small grids"""
    config = load_config(name, out=tempfile.mkdtemp(), timestamp=False)
    config.grids.update(grids)
    return config


def read_json(path):
    with open(path) as file:
        return json.load(file)


def test_verify_cmd():
    config = small_config("quarter_pi", theta=256, x=64, beta=8, refine=0)
    result = command.verify_cmd(config)

    assert result["success"]
    assert result["exit_code"] == 0
    assert [os.path.basename(path) for path in result["files"]] == ["verify.json"]

    document = read_json(result["files"][0])
    assert document["command"] == "verify"
    assert document["config"] == "quarter_pi"
    assert document["report"]["all_passed"]
    assert "timestamp" not in document


def test_verify_cmd_failure():
    config = small_config("quarter_pi_weak", theta=128, x=32, beta=4)
    result = command.verify_cmd(config)

    assert not result["success"]
    assert result["exit_code"] == 1
    assert "(A2)" in result["report"].failed


def test_graphs_cmd():
    config = small_config("quarter_pi", G=64, N=200)
    result = command.graphs_cmd(config, beta=0.5)

    assert result["exit_code"] == 0
    assert result["pinch"].min_gap > 0
    names = sorted(os.path.basename(path) for path in result["files"])
    assert names == ["attractor.csv", "pinch.json", "repeller.csv"]

    with open(os.path.join(config.output["out"], "attractor.csv")) as file:
        rows = list(csv.DictReader(file))
    assert len(rows) == 64

    document = read_json(os.path.join(config.output["out"], "pinch.json"))
    assert document["beta"] == 0.5
    assert not document["escaped"]
    assert document["pinch"]["min_gap"] == pytest.approx(result["pinch"].min_gap)


def test_graphs_cmd_escape():
    config = small_config("figure1", G=64, N=200)
    result = command.graphs_cmd(config, beta=0.9)

    assert not result["success"]
    assert result["exit_code"] == 1
    document = read_json(result["files"][-1])
    assert document["escaped"]
    assert document["pinch"] is None
    assert document["attractor"]["escaped"] > 0


def test_figure_cmd():
    config = small_config("figure1", G=32, N=100)
    result = command.figure_cmd(config, beta=0.5, png=True)

    names = sorted(os.path.basename(path) for path in result["files"])
    assert names == [
        "attractor.csv",
        "attractor.qpfg",
        "figure.png",
        "pinch.json",
        "repeller.csv",
        "repeller.qpfg",
    ]

    with open(os.path.join(config.output["out"], "attractor.qpfg"), "rb") as file:
        thetas, values = read_binary_graph(file)
    assert thetas.size == 32
    assert values.tolist() == result["attractor"].values.tolist()


def test_bisect_cmd():
    config = small_config("autonomous_fold", G=8, N=5000, N_max=5000)
    config.tolerances["beta_tol"] = 1e-6
    result = command.bisect_cmd(config)

    assert result["exit_code"] == 0
    assert result["result"].classification == SMOOTH
    document = read_json(result["files"][0])
    assert document["result"]["classification"] == SMOOTH
    assert document["G"] == 8


def test_regions_cmd_stops():
    config = small_config("figure1")
    result = command.regions_cmd(config, n_max=1)

    # no admissible M_1 exists for this strip
    assert not result["success"]
    assert result["exit_code"] == 1
    first, second = result["levels"]
    assert "bounds" in first
    assert first["backward_audit"]["n"] == 0
    assert second["M_n"] is None
    assert "bounds" not in second

    document = read_json(result["files"][0])
    assert len(document["levels"]) == 2
    assert document["schedule"]["M_n"] == [4]


def test_sweep_cmd():
    config = small_config("figure1", G=64, N=200)
    result = command.sweep_cmd(config, start=0.0, stop=0.9, num=4)

    assert result["exit_code"] == 0
    assert [row["escaped"] for row in result["rows"]] == [False, False, False, True]

    with open(result["files"][0]) as file:
        lines = file.read().splitlines()
    assert lines[0] == "beta,lyap_plus,lyap_minus,min_gap,escaped"
    assert len(lines) == 5
    assert lines[-1].endswith(",true")


def test_configs_cmd():
    result = command.configs_cmd()
    names = [row["name"] for row in result["configs"]]

    assert names == ["autonomous_fold", "figure1", "quarter_pi", "quarter_pi_weak"]
    kinds = {row["name"]: row["kind"] for row in result["configs"]}
    assert kinds["quarter_pi"] == "ArctanQuarterPi"
    assert kinds["autonomous_fold"] == "Custom"
