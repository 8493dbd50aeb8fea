# Standard imports
import csv
import io
import json
import math
import tempfile

import numpy as np
import pytest

# Custom imports
from qpfmaps.core.graphs import BACKWARD, FORWARD, GraphSample, circle_grid
from qpfmaps.core.writer import (
    BinaryGraphWriter,
    CsvWriter,
    JsonWriter,
    PngWriter,
    read_binary_graph,
)
from qpfmaps.core.writer.jsonwriter import to_json_value


@pytest.fixture
def graph():
    thetas = circle_grid(8)
    return GraphSample(thetas, 1.0 + 0.1 * np.sin(2 * np.pi * thetas), FORWARD, 50, 0.5)


@pytest.fixture
def rows():
    return [
        {"beta": 0.1, "lyap_plus": -2.5, "lyap_minus": 4.6, "min_gap": 1.2, "escaped": False},
        {"beta": 0.9, "lyap_plus": math.nan, "lyap_minus": math.nan, "min_gap": math.nan, "escaped": True},
    ]


def test_csv_writer_graph(graph):
    filename = tempfile.mkstemp(suffix=".csv")[1]
    with open(filename, "w", newline="") as file:
        count = CsvWriter.from_graph(file, graph).save()
    assert count == 8

    with open(filename) as file:
        observed = list(csv.DictReader(file))

    assert list(observed[0]) == ["theta", "value"]
    assert [float(row["theta"]) for row in observed] == graph.thetas.tolist()
    assert [float(row["value"]) for row in observed] == graph.values.tolist()


def test_csv_writer_sweep(rows):
    file = io.StringIO()
    CsvWriter.from_sweep(file, rows).save()

    lines = file.getvalue().splitlines()
    assert lines[0] == "beta,lyap_plus,lyap_minus,min_gap,escaped"
    assert lines[1] == "0.1,-2.5,4.6,1.2,false"
    assert lines[2] == "0.9,nan,nan,nan,true"


@pytest.mark.parametrize("separator", [",", "\t", ";"])
def test_csv_writer_separator(rows, separator):
    file = io.StringIO()
    writer = CsvWriter.from_sweep(file, rows)
    writer.separator = separator
    writer.save()

    header = file.getvalue().splitlines()[0]
    assert header.split(separator) == ["beta", "lyap_plus", "lyap_minus", "min_gap", "escaped"]


def test_csv_writer_extra_columns():
    file = io.StringIO()
    CsvWriter(file, [{"theta": 0.0, "value": 1.0, "ignored": 3}], ["theta", "value"]).save()
    assert file.getvalue() == "theta,value\n0.0,1.0\n"


def test_binary_writer(graph):
    file = io.BytesIO()
    writer = BinaryGraphWriter(file, graph)
    assert writer.total_count() == 8
    writer.save()

    payload = file.getvalue()
    assert payload[:4] == b"QPFG"
    # header of 16 bytes then 8 pairs of doubles
    assert len(payload) == 16 + 8 * 16

    file.seek(0)
    thetas, values = read_binary_graph(file)
    assert np.array_equal(thetas, graph.thetas)
    assert np.array_equal(values, graph.values)


@pytest.mark.parametrize(
    "payload",
    [b"QPF", b"XXXX" + bytes(12), b"QPFG\x02\x00\x00\x00" + bytes(8), b"QPFG\x01\x00\x00\x00\x02" + bytes(7) + bytes(16)],
)
def test_binary_reader_errors(payload):
    with pytest.raises(ValueError):
        read_binary_graph(io.BytesIO(payload))


def test_to_json_value():
    document = {
        "a": np.float64(0.5),
        "b": np.int64(3),
        "c": np.bool_(True),
        "d": [math.nan, math.inf, -math.inf],
        "e": np.array([1.0, 2.0]),
        1: (1, 2),
    }
    assert to_json_value(document) == {
        "a": 0.5,
        "b": 3,
        "c": True,
        "d": [None, "inf", "-inf"],
        "e": [1.0, 2.0],
        "1": [1, 2],
    }


def test_json_writer():
    document = {"z": 1, "a": {"value": math.nan}}

    file = io.StringIO()
    JsonWriter(file, document, timestamp=False).save()
    text = file.getvalue()
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"z"')
    assert json.loads(text) == {"a": {"value": None}, "z": 1}

    # no timestamp: identical output for identical input
    again = io.StringIO()
    JsonWriter(again, document, timestamp=False).save()
    assert again.getvalue() == text

    stamped = io.StringIO()
    JsonWriter(stamped, document).save()
    assert "timestamp" in json.loads(stamped.getvalue())
    # the input document is left untouched
    assert "timestamp" not in document


def test_png_writer(graph):
    repeller = GraphSample(graph.thetas, np.zeros(8), BACKWARD, 50, 0.5)

    file = io.BytesIO()
    count = PngWriter(file, graph, repeller, title="beta = 0.5").save()
    assert count == 2
    assert file.getvalue()[:8] == b"\x89PNG\r\n\x1a\n"

    file = io.BytesIO()
    assert PngWriter(file, graph).save() == 1
