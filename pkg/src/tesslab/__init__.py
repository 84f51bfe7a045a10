"""Total tessellation covers: exact solvers, bounds, constructions and walks."""

from .covers import CliquePartition, InvalidCoverError, TotalCover, validate_total_cover
from .graph import Graph, GraphError

__all__ = [
    "CliquePartition",
    "Graph",
    "GraphError",
    "InvalidCoverError",
    "TotalCover",
    "validate_total_cover",
]

__version__ = "0.1.0"
