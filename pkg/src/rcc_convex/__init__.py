"""Convex realizations of RCC8 constraint networks with exact rational arithmetic."""
from .algebra import Base, Relation, compose, converse, format_mask, parse_mask
from .consistency import atomic_refinement, is_consistent, is_path_consistent, path_consistency
from .network import Network, NetworkError, ParseError, parse_network

__version__ = "0.1.0"

__all__ = [
    "Base", "Relation", "compose", "converse", "format_mask", "parse_mask",
    "atomic_refinement", "is_consistent", "is_path_consistent", "path_consistency",
    "Network", "NetworkError", "ParseError", "parse_network", "__version__",
]
