"""Hamilton l-cycles in k-uniform hypergraphs: constructions, gadgets, exact search and an absorbing heuristic."""

from __future__ import annotations

__version__ = "0.1.0"

from .hgraph import KGraph, PartiteSpec, complete, complete_partite, load_graph, dump_graph, min_codegree, random_kgraph
from .paths import CycleSeq, PathSeq, concat, is_hamilton_cycle_in, is_path_in, threshold_denominator
from .oracle import SearchBudget, SearchOutcome, Status, find_hamilton_cycle, find_path_between, find_perfect_matching
from .pipeline import PipelineParams, PipelineTrace, run_pipeline

__all__ = [
    "KGraph", "PartiteSpec", "complete", "complete_partite", "load_graph", "dump_graph", "min_codegree",
    "random_kgraph", "CycleSeq", "PathSeq", "concat", "is_hamilton_cycle_in", "is_path_in",
    "threshold_denominator", "SearchBudget", "SearchOutcome", "Status", "find_hamilton_cycle",
    "find_path_between", "find_perfect_matching", "PipelineParams", "PipelineTrace", "run_pipeline",
]
