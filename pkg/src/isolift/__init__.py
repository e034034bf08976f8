"""Vertex-classification refinement and Sherali-Adams relaxations of graph isomorphism."""
from .graph import Graph, parse_graph, format_graph
from .partition import OrderedPartition, trivial_partition
from .relations import Kind, aut_run, iso_run, equiv_check
from .polytopes import build_birkhoff, build_tinhofer, build_qpoly, restrict_to_partition, uniform_point
from .exact_lp import feasible, maximize, max_var, forced_zero_set, check_point

__all__ = [
    "Graph", "parse_graph", "format_graph", "OrderedPartition", "trivial_partition",
    "Kind", "aut_run", "iso_run", "equiv_check", "build_birkhoff", "build_tinhofer",
    "build_qpoly", "restrict_to_partition", "uniform_point", "feasible", "maximize",
    "max_var", "forced_zero_set", "check_point",
]
__version__ = "0.1.0"
