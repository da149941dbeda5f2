"""Exact computations with chain complexes, simplicial modules and enriched categories over a field."""

from .linalg import Field, Matrix
from .chains import ChainComplex, ChainMap, StructuralError
from .simplicial import SimplicialModule, SimplicialMap
from .enriched import EnrichedCategory, EnrichedFunctor
from .intervals import CocategoryInterval, verify_cocategory, verify_cylinder
from .path_objects import build_bundle, verify_path_object

__all__ = [
    "Field",
    "Matrix",
    "ChainComplex",
    "ChainMap",
    "StructuralError",
    "SimplicialModule",
    "SimplicialMap",
    "EnrichedCategory",
    "EnrichedFunctor",
    "CocategoryInterval",
    "verify_cocategory",
    "verify_cylinder",
    "build_bundle",
    "verify_path_object",
]
