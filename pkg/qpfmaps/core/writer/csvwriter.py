# Standard imports
import csv

# Custom imports
from .abstractwriter import AbstractWriter
from qpfmaps.commons import GRAPH_HEADER, SWEEP_HEADER
import qpfmaps.commons as cm

LOGGER = cm.logger()


class CsvWriter(AbstractWriter):
    """Writer exporting rows of dicts into a comma separated file

    Missing columns are written empty; NaN is written as ``nan``.

    Example:
        >>> with open("sweep.csv", "w", newline="") as file:
        ...    CsvWriter(file, rows, SWEEP_HEADER).save()
    """

    def __init__(self, device, rows, fields):
        super().__init__(device)
        self.rows = rows
        self.fields = list(fields)
        self.separator = ","

    @classmethod
    def from_graph(cls, device, graph):
        """Writer of the ``theta,value`` table of a GraphSample"""
        rows = (
            {"theta": float(theta), "value": float(value)}
            for theta, value in zip(graph.thetas, graph.values)
        )
        return cls(device, rows, GRAPH_HEADER)

    @classmethod
    def from_sweep(cls, device, rows):
        return cls(device, rows, SWEEP_HEADER)

    def async_save(self, *args, **kwargs):
        r"""Iteratively dumps rows into the CSV file

        Examples::

            theta,value
            0.0,1.5644
            0.5,1.5631
        """
        options = {
            "f": self.device,
            "delimiter": self.separator,
            "lineterminator": "\n",
            "extrasaction": "ignore",
        }
        options.update(kwargs)
        options["fieldnames"] = self.fields

        writer = csv.DictWriter(**options)
        writer.writeheader()
        for count, row in enumerate(self.rows, 1):
            writer.writerow({k: _format(v) for k, v in row.items()})
            yield count


def _format(value):
    if isinstance(value, bool):
        return str(value).lower()
    return value
