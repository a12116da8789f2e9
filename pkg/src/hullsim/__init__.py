"""Desk-scale simulator and verification harness for distributed convex hull
formation by particles on the triangular lattice."""

from .engine import (
    InvariantViolation,
    LocalView,
    Particle,
    Simulation,
    ValidationError,
)
from .hull_oracle import HullSets, distances_to_strong_hull, hulls
from .lattice import ObjectError, ObjectShape, load_object, parse_object_text
from .solo import SoloState, run_solo

__version__ = "1.0.0"

__all__ = [
    "HullSets",
    "InvariantViolation",
    "LocalView",
    "ObjectError",
    "ObjectShape",
    "Particle",
    "Simulation",
    "SoloState",
    "ValidationError",
    "distances_to_strong_hull",
    "hulls",
    "load_object",
    "parse_object_text",
    "run_solo",
    "__version__",
]
