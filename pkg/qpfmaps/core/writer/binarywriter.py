"""Compact binary format of graph samples.

Layout, little endian::

    magic    4 bytes   b"QPFG"
    version  u32       1
    G        u64       number of grid points
    pairs    G x (f64 theta, f64 value)
"""
# Standard imports
import struct

# Custom imports
import numpy as np

from .abstractwriter import AbstractWriter
import qpfmaps.commons as cm

LOGGER = cm.logger()

MAGIC = b"QPFG"
VERSION = 1
HEADER = struct.Struct("<4sIQ")


class BinaryGraphWriter(AbstractWriter):
    """Writer of a GraphSample into the QPFG binary format

    ``device`` must be opened in binary mode.
    """

    def __init__(self, device, graph):
        super().__init__(device)
        self.graph = graph

    def total_count(self) -> int:
        return self.graph.size

    def async_save(self, *args, **kwargs):
        self.device.write(HEADER.pack(MAGIC, VERSION, self.graph.size))
        pairs = np.column_stack((self.graph.thetas, self.graph.values)).astype("<f8")
        self.device.write(pairs.tobytes())
        yield self.graph.size


def read_binary_graph(device) -> tuple:
    """Read back (thetas, values) from a QPFG stream

    Raises:
        ValueError: wrong magic, unknown version or truncated payload
    """
    header = device.read(HEADER.size)
    if len(header) != HEADER.size:
        raise ValueError("truncated QPFG header")
    magic, version, size = HEADER.unpack(header)
    if magic != MAGIC:
        raise ValueError(f"not a QPFG stream (magic {magic!r})")
    if version != VERSION:
        raise ValueError(f"unsupported QPFG version {version}")
    payload = device.read(16 * size)
    if len(payload) != 16 * size:
        raise ValueError("truncated QPFG payload")
    pairs = np.frombuffer(payload, dtype="<f8").reshape(size, 2)
    return pairs[:, 0].copy(), pairs[:, 1].copy()
