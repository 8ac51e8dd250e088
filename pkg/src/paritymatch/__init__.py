"""Parity perfect matchings in two-colored bipartite graphs."""

from .core import (
    BLUE,
    RED,
    Color,
    ColoredBipartiteGraph,
    Edge,
    Labeling,
    Matching,
    Parity,
    build_complete_double,
    edge_violates,
    red_parity_identity,
    violation_count,
    violation_edges,
)
from .formats import format_graph, parse_graph, read_graph, write_graph
from .solver import ParityResult, ResultKind, solve_parity, verify_result

__version__ = "0.1.0"

__all__ = [
    "BLUE", "RED", "Color", "ColoredBipartiteGraph", "Edge", "Labeling", "Matching",
    "Parity", "build_complete_double", "edge_violates", "red_parity_identity",
    "violation_count", "violation_edges",
    "format_graph", "parse_graph", "read_graph", "write_graph",
    "ParityResult", "ResultKind", "solve_parity", "verify_result",
]
