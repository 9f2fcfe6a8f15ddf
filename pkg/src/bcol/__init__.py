"""b-coloring: a multi-start randomized heuristic, an exact model by representatives
and a fix-and-optimize local search joining the two."""

from .coloring import Coloring, ColoringError, b_vertices, is_b_coloring, is_proper
from .constructive import RclParams, randomized_constructive
from .dimacs import DimacsError, parse_dimacs, read_dimacs, write_dimacs
from .generators import generate
from .graph import Graph, GraphError, InstanceMeta, density, m_bound
from .multistart import MultistartConfig, MultistartResult, default_it_max, multistart_b_col

__version__ = "0.1.0"

__all__ = [
    "Coloring",
    "ColoringError",
    "DimacsError",
    "Graph",
    "GraphError",
    "InstanceMeta",
    "MultistartConfig",
    "MultistartResult",
    "RclParams",
    "b_vertices",
    "default_it_max",
    "density",
    "generate",
    "is_b_coloring",
    "is_proper",
    "m_bound",
    "multistart_b_col",
    "parse_dimacs",
    "randomized_constructive",
    "read_dimacs",
    "write_dimacs",
]
