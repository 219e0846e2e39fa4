"""Uniform front end over the MaxCut solvers used on (sub)graphs."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .errors import ParameterError
from .graph import Graph, brute_force_maxcut, cut_value, spins_to_bitstring
from .gw import gw_solve
from .qaoa import QaoaConfig, optimize
from .seeding import make_rng

SOLVER_KINDS = ("qaoa", "gw", "exact", "random")
LOCAL_SEARCH_TOL = 1e-12


@dataclass
class SolveRecord:
    """Outcome of one solve; ``cut`` is always ``cut_value(graph, assignment)``."""

    solver: str
    assignment: np.ndarray
    cut: float
    elapsed: float = 0.0
    metadata: dict = field(default_factory=dict)
    cluster: Optional[int] = None

    @property
    def bitstring(self) -> str:
        return spins_to_bitstring(self.assignment)

    def to_record(self, timings=True) -> dict:
        rec = {"solver": self.solver, "cluster": self.cluster, "cut": self.cut,
               "bitstring": self.bitstring, "metadata": self.metadata}
        if timings:
            rec["elapsed_s"] = self.elapsed
        return rec


def solve_qaoa(g: Graph, cfg: QaoaConfig, seed: int) -> SolveRecord:
    res = optimize(g, cfg.with_seed(seed))
    return SolveRecord("qaoa", res.assignment, res.cut, res.elapsed, res.to_record())


def solve_gw(g: Graph, seed: int) -> SolveRecord:
    """GW with the best of its roundings as the assignment."""
    res = gw_solve(g, seed=seed)
    return SolveRecord("gw", res.best_assignment, res.best_cut, res.elapsed, res.to_record())


def solve_exact(g: Graph) -> SolveRecord:
    t0 = time.perf_counter()
    spins, value = brute_force_maxcut(g)
    return SolveRecord("exact", spins, value, time.perf_counter() - t0, {})


def random_baseline(g: Graph, seed: int = 0, uniform: bool = False) -> SolveRecord:
    """Seeded uniform random cut, improved by one-exchange local search.

    Nodes are scanned in index order and any single flip that raises the cut
    is taken, until a full pass finds none. ``uniform=True`` skips the search.
    """
    if g.num_nodes < 1:
        raise ParameterError("graph has no nodes")
    t0 = time.perf_counter()
    rng = make_rng("random-baseline", int(seed))
    spins = np.where(rng.random(g.num_nodes) < 0.5, 1, -1).astype(np.int8)
    flips = 0
    if not uniform:
        indptr, indices, weights = g.csr
        flips = int(kernels.one_exchange(indptr, indices, weights, spins, LOCAL_SEARCH_TOL))
    return SolveRecord("random", spins, cut_value(g, spins), time.perf_counter() - t0,
                       {"uniform": uniform, "flips": flips})


def run_solver(kind: str, g: Graph, cfg: Optional[QaoaConfig], seed: int) -> SolveRecord:
    if kind == "qaoa":
        return solve_qaoa(g, cfg or QaoaConfig(), seed)
    if kind == "gw":
        return solve_gw(g, seed)
    if kind == "exact":
        return solve_exact(g)
    if kind == "random":
        return random_baseline(g, seed)
    raise ParameterError(f"unknown solver {kind!r}; expected one of {SOLVER_KINDS}")
