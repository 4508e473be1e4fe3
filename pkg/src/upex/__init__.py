"""Deciding whether a partial upward planar drawing extends to a whole graph."""

from .core import (
    Decision,
    DirectedGraph,
    FullDrawing,
    InvalidInstance,
    MalformedDrawing,
    PartialDrawing,
    PreconditionError,
    UpeInstance,
    UpexError,
    UpwardEmbedding,
    ValidationReport,
    extract_embedding,
    make_instance,
    validate_instance,
    verify_drawing,
)
from .geometry import Point, point

__all__ = [
    "Decision",
    "DirectedGraph",
    "FullDrawing",
    "InvalidInstance",
    "MalformedDrawing",
    "PartialDrawing",
    "Point",
    "PreconditionError",
    "UpeInstance",
    "UpexError",
    "UpwardEmbedding",
    "ValidationReport",
    "extract_embedding",
    "make_instance",
    "point",
    "validate_instance",
    "verify_drawing",
]
