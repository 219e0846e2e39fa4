"""QAOA-in-QAOA: partition, solve sub-graphs, merge through a signed coarse graph.

With sub-solutions fixed, flipping a whole cluster only changes which
crossing edges are cut. Edge ``(u, v)`` between clusters ``A`` and ``B``
contributes ``+w`` to the merge edge ``(A, B)`` if it is currently uncut and
``-w`` if it is cut; then for any merge assignment ``z``::

    cut(G, flipped) = sum(intra cuts) + base_inter_cut + cut(merge graph, z)

so maximizing the merge graph's cut picks the best set of cluster flips.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InputError, ParameterError
from .graph import Graph, cut_value
from .orchestrator import CLASSICAL, SolverPolicy, dispatch, plan, select_best
from .partition import Partition, induce_subgraphs, partition_graph
from .qaoa import QaoaConfig
from .seeding import derive_seed
from .solvers import SolveRecord, run_solver


@dataclass(frozen=True)
class MergeGraph:
    graph: Graph
    cluster_map: tuple
    base_inter_cut: float


def build_merge_graph(g: Graph, p: Partition, subs: Sequence) -> MergeGraph:
    """Coarse graph over clusters from the current sub-assignments.

    ``subs`` holds one record (or local spin array) per cluster, in cluster
    order. A merge edge exists for every cluster pair joined by at least one
    parent edge, even if its signed weight sums to zero.
    """
    if len(subs) != len(p.clusters):
        raise InputError(f"{len(subs)} sub-solutions for {len(p.clusters)} clusters")
    spins = _concatenate(p, [getattr(s, "assignment", s) for s in subs])
    labels = p.labels()
    weights = {}
    base = []
    for i, j, w in g.edges:
        a, b = labels[i], labels[j]
        if a == b:
            continue
        key = (a, b) if a < b else (b, a)
        if spins[i] != spins[j]:
            weights[key] = weights.get(key, 0.0) - w
            base.append(w)
        else:
            weights[key] = weights.get(key, 0.0) + w
    mg = Graph(len(p.clusters), tuple((a, b, w) for (a, b), w in sorted(weights.items())))
    return MergeGraph(mg, p.clusters, math.fsum(base))


def _concatenate(p: Partition, local_assignments) -> np.ndarray:
    out = np.ones(p.num_nodes, dtype=np.int8)
    for c, local in zip(p.clusters, local_assignments):
        local = np.asarray(local)
        if local.shape != (len(c),):
            raise InputError(f"sub-assignment of length {local.size} for cluster of size {len(c)}")
        out[list(c)] = local
    return out


def apply_merge_solution(parent_assignments, mg: MergeGraph, merge_assignment) -> np.ndarray:
    """Global spins: cluster ``k``'s local spins, negated where merge spin is -1."""
    z = np.asarray(merge_assignment)
    if z.shape != (len(mg.cluster_map),):
        raise InputError(f"merge assignment of length {z.size} for {len(mg.cluster_map)} clusters")
    if len(parent_assignments) != len(mg.cluster_map):
        raise InputError("one local assignment per cluster required")
    n = sum(len(c) for c in mg.cluster_map)
    p = Partition(tuple(mg.cluster_map), n)
    flipped = [np.asarray(a, dtype=np.int8) * np.int8(zk) for a, zk in zip(parent_assignments, z)]
    return _concatenate(p, flipped)


def solve_direct(g: Graph, policy: SolverPolicy, cfg: QaoaConfig, seed: int) -> SolveRecord:
    """Solve ``g`` in one piece with whatever the policy picks for it."""
    choices = policy.choose(g, cfg)
    records = [run_solver(kind, g, c, seed) for kind, c in choices]
    if len(records) == 2:
        return select_best(*records)
    return records[0]


def _solve_merge(mg: Graph, n_max, cfg, seed, workers, level, trace) -> SolveRecord:
    if mg.num_nodes <= n_max:
        rec = solve_direct(mg, CLASSICAL, cfg, seed)
    else:
        rec = _qaoa_squared(mg, n_max, CLASSICAL, cfg, seed, workers, level, trace)
    # never do worse than leaving every cluster as it is (merge cut 0)
    if rec.cut > 0.0:
        return rec
    return SolveRecord("identity", np.ones(mg.num_nodes, dtype=np.int8), 0.0, rec.elapsed,
                       {"rejected": rec.solver})


def _qaoa_squared(g, n_max, policy, cfg, seed, workers, level, trace) -> SolveRecord:
    t0 = time.perf_counter()
    if g.num_nodes <= n_max:
        return solve_direct(g, policy, cfg, seed)

    part = partition_graph(g, n_max)
    subs = induce_subgraphs(g, part)
    records = dispatch(plan(subs, policy, derive_seed(seed, "level", level), cfg), workers)
    mg = build_merge_graph(g, part, records)
    merge_rec = _solve_merge(mg.graph, n_max, cfg, derive_seed(seed, "merge", level),
                             workers, level + 1, trace)
    spins = apply_merge_solution([r.assignment for r in records], mg, merge_rec.assignment)
    global_cut = cut_value(g, spins)
    trace.append({
        "level": level,
        "num_clusters": len(part.clusters),
        "cluster_sizes": part.sizes,
        "solver_per_cluster": [r.solver for r in records],
        "intra_cuts": [r.cut for r in records],
        "base_inter_cut": mg.base_inter_cut,
        "merge_cut": merge_rec.cut,
        "global_cut": global_cut,
    })
    return SolveRecord("qaoa2", spins, global_cut, time.perf_counter() - t0,
                       {"partition": [list(c) for c in part.clusters]})


def qaoa_squared(g: Graph, n_max: int, policy: SolverPolicy, cfg: Optional[QaoaConfig] = None,
                 seed: int = 0, workers: Optional[int] = None) -> SolveRecord:
    """Divide-and-conquer MaxCut.

    The policy chooses solvers for the first level's sub-graphs only; merge
    graphs and deeper levels are solved classically (exact up to 20 nodes,
    GW beyond). The returned record's metadata carries the per-level trace.
    """
    if n_max < 2:
        raise ParameterError("n_max must be >= 2")
    cfg = cfg or QaoaConfig()
    t0 = time.perf_counter()
    trace = []
    rec = _qaoa_squared(g, n_max, policy, cfg, seed, workers, 0, trace)
    trace.sort(key=lambda t: t["level"])
    rec.metadata = {**rec.metadata, "trace": trace, "policy": policy.kind, "n_max": n_max,
                    "direct": not trace}
    rec.cut = cut_value(g, rec.assignment)
    rec.elapsed = time.perf_counter() - t0
    return rec
