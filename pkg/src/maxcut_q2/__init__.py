"""Divide-and-conquer MaxCut (QAOA-in-QAOA) with statevector QAOA and GW sub-solvers."""
from .errors import (
    DimensionError,
    DispatchError,
    InputError,
    MaxCutError,
    ParameterError,
    ParseError,
    SizeError,
    SolverNumericError,
)
from .graph import Graph, brute_force_maxcut, cut_value, erdos_renyi, parse_graph, serialize_graph
from .gw import GwResult, gw_solve
from .merge import MergeGraph, build_merge_graph, apply_merge_solution, qaoa_squared
from .orchestrator import SolverPolicy, load_policy
from .partition import Partition, greedy_modularity, enforce_size_cap, induce_subgraphs
from .qaoa import QaoaConfig, QaoaResult, optimize
from .solvers import SolveRecord, random_baseline

__version__ = "0.1.0"
