"""Exact Gomory-Hu trees for unweighted simple graphs."""

from .certificate import forest_decomposition, sparsify
from .config import GHConfig, RunStats
from .graph import (
    CapGraph,
    Cut,
    CutSideError,
    DuplicateEdgeError,
    GraphError,
    GroupingError,
    SelfLoopError,
    SimpleGraph,
    VertexGrouping,
    VertexRangeError,
    build_simple_graph,
    contract,
    cut_value,
)
from .io import emit_graph, emit_tree, generate, parse_graph, parse_tree
from .isolating import IsolatingCutsResult, isolating_cuts
from .maxflow import count_flows, max_flow_value, set_mincut, st_mincut_minimal
from .partial_tree import (
    PartialTree,
    bruteforce_ssc_oracle,
    combine,
    partial_tree,
    partial_tree_step,
    steiner_connectivity,
)
from .pipeline import GHTree, gh_tree_classic, gh_tree_fast, query_mincut, small_conn, verify_gh_tree
from .refine import AuxiliaryGraph, build_auxiliary_graphs, refine, refine_part
from .sstmincut import SamplerConfig, ValTable, single_source_mincut
from .wellinked import (
    DecompositionResult,
    WellLinkedCluster,
    expander_decompose,
    partition_high_degree,
    verify_wellinked,
    wellinked_subsets,
)

__version__ = "0.1.0"

__all__ = [
    "AuxiliaryGraph",
    "CapGraph",
    "Cut",
    "CutSideError",
    "DecompositionResult",
    "DuplicateEdgeError",
    "GHConfig",
    "GHTree",
    "GraphError",
    "GroupingError",
    "IsolatingCutsResult",
    "PartialTree",
    "RunStats",
    "SamplerConfig",
    "SelfLoopError",
    "SimpleGraph",
    "ValTable",
    "VertexGrouping",
    "VertexRangeError",
    "WellLinkedCluster",
    "bruteforce_ssc_oracle",
    "build_auxiliary_graphs",
    "build_simple_graph",
    "combine",
    "contract",
    "count_flows",
    "cut_value",
    "emit_graph",
    "emit_tree",
    "expander_decompose",
    "forest_decomposition",
    "generate",
    "gh_tree_classic",
    "gh_tree_fast",
    "isolating_cuts",
    "max_flow_value",
    "parse_graph",
    "parse_tree",
    "partial_tree",
    "partial_tree_step",
    "partition_high_degree",
    "query_mincut",
    "refine",
    "refine_part",
    "set_mincut",
    "single_source_mincut",
    "small_conn",
    "sparsify",
    "st_mincut_minimal",
    "steiner_connectivity",
    "verify_gh_tree",
    "verify_wellinked",
    "wellinked_subsets",
]
