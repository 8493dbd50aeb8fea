# Standard imports
import json

# Custom imports
from qpfmaps.core.family import (
    AbstractFamily,
    ArctanIntro,
    ArctanQuarterPi,
    HqDrive,
    SineDrive,
    Harper,
    Custom,
)
from qpfmaps.core.errors import ConfigurationError
from qpfmaps.commons import GOLDEN_MEAN
import qpfmaps.commons as cm

LOGGER = cm.logger()

FAMILIES = {
    cm.camel_to_snake(cls.kind): cls
    for cls in (ArctanIntro, ArctanQuarterPi, HqDrive, SineDrive, Harper, Custom)
}


def family_kinds() -> list:
    """Return the names of the supported family kinds"""
    return [cls.kind for cls in FAMILIES.values()]


def create_family(document: dict, omega=GOLDEN_MEAN) -> AbstractFamily:
    """Build the family described by a document

    The kind is matched case insensitively, either in CamelCase
    ("ArctanQuarterPi") or in snake_case ("arctan_quarter_pi").

    Example::

        create_family({"kind": "HqDrive", "alpha": 100, "extra": {"q": 3}})

    Raises:
        ConfigurationError: unknown kind, missing alpha or invalid extra
    """
    if not isinstance(document, dict) or "kind" not in document:
        raise ConfigurationError("family document needs a 'kind'")

    kind = str(document["kind"])
    key = cm.camel_to_snake(kind) if not kind.islower() else kind
    if key not in FAMILIES:
        raise ConfigurationError(
            "unknown family kind '%s' (expected one of %s)"
            % (kind, ", ".join(family_kinds()))
        )

    LOGGER.debug("create_family: %s", document)
    return FAMILIES[key](
        alpha=document.get("alpha", 1.0),
        omega=omega,
        extra=document.get("extra", {}),
    )


def load_family(filepath, omega=GOLDEN_MEAN) -> AbstractFamily:
    """Read a JSON family document from disk"""
    try:
        with open(filepath) as file:
            document = json.load(file)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"cannot read family document {filepath}: {e}")
    return create_family(document, omega)
