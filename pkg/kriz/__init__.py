"""Exact cohomology of configuration spaces of points on an elliptic curve."""

from pathlib import Path

from kriz.classes import NamedClass, build_class
from kriz.cohomology import (
    betti_polynomial,
    closed_form,
    cohomology_slice,
    hodge_polynomial,
)
from kriz.model import KrizModel, ModelId, get_model
from kriz.storage import Storage

with open(Path(__file__).parent.parent / "VERSION", "r") as version_file:
    __version__ = version_file.read().strip()

__all__ = [
    "KrizModel",
    "ModelId",
    "NamedClass",
    "Storage",
    "betti_polynomial",
    "build_class",
    "closed_form",
    "cohomology_slice",
    "get_model",
    "hodge_polynomial",
]
