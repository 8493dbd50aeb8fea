"""Expose of high-level writer classes"""

# Import AbstractWriter first, otherwise the imports fail
from .abstractwriter import AbstractWriter
from .csvwriter import CsvWriter
from .binarywriter import BinaryGraphWriter, read_binary_graph
from .jsonwriter import JsonWriter
from .pngwriter import PngWriter
