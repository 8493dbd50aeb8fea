# Standard imports
import datetime
import json
import math

# Custom imports
import numpy as np

from .abstractwriter import AbstractWriter
import qpfmaps.commons as cm

LOGGER = cm.logger()


def to_json_value(value):
    """Convert numpy scalars and arrays, map NaN to null and infinities to strings"""
    if isinstance(value, dict):
        return {str(k): to_json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_value(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_json_value(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
    return value


class JsonWriter(AbstractWriter):
    """Writer of a report document as UTF-8 JSON with sorted keys

    A ``timestamp`` field is added unless ``timestamp`` is False, so two
    runs of the same configuration give identical files without it.
    """

    def __init__(self, device, document: dict, timestamp=True):
        super().__init__(device)
        self.document = document
        self.timestamp = timestamp

    def total_count(self) -> int:
        return 1

    def async_save(self, *args, **kwargs):
        document = to_json_value(self.document)
        if self.timestamp:
            document["timestamp"] = datetime.datetime.now().isoformat(timespec="seconds")
        json.dump(document, self.device, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)
        self.device.write("\n")
        yield 1
