"""Cops and robbers on graphs: exact solving, retract covers, decomposition bounds and simulation."""

from .errors import (
    BoundNotFoundError,
    ConfigurationError,
    IllegalMoveError,
    InvalidInputError,
    ParseError,
    PursuitError,
    ResourceBudgetError,
    SoundnessError,
    StructuralError,
    UncoverableError,
)
from .graph import Graph, InducedSubgraph, is_clique, is_isometric_path

__all__ = [
    "BoundNotFoundError",
    "ConfigurationError",
    "Graph",
    "IllegalMoveError",
    "InducedSubgraph",
    "InvalidInputError",
    "ParseError",
    "PursuitError",
    "ResourceBudgetError",
    "SoundnessError",
    "StructuralError",
    "UncoverableError",
    "is_clique",
    "is_isometric_path",
]
