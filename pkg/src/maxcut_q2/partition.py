"""Greedy-modularity partitioning with a hard cluster-size cap."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ParameterError
from .graph import Graph


@dataclass(frozen=True)
class Partition:
    """Disjoint clusters covering ``0..num_nodes-1``.

    Clusters are sorted tuples, ordered by their smallest member.
    """

    clusters: tuple
    num_nodes: int

    @classmethod
    def from_clusters(cls, clusters: Sequence[Sequence[int]], num_nodes: int) -> "Partition":
        canon = sorted((tuple(sorted(int(v) for v in c)) for c in clusters), key=lambda c: c[0] if c else -1)
        seen = set()
        for c in canon:
            if not c:
                raise ParameterError("empty cluster")
            for v in c:
                if v in seen or not 0 <= v < num_nodes:
                    raise ParameterError(f"node {v} duplicated or out of range")
                seen.add(v)
        if len(seen) != num_nodes:
            raise ParameterError(f"partition covers {len(seen)} of {num_nodes} nodes")
        return cls(tuple(canon), num_nodes)

    @property
    def sizes(self):
        return [len(c) for c in self.clusters]

    def labels(self):
        """Cluster index of every node."""
        lab = [0] * self.num_nodes
        for k, c in enumerate(self.clusters):
            for v in c:
                lab[v] = k
        return lab

    def serialize(self) -> str:
        return "".join(" ".join(map(str, c)) + "\n" for c in self.clusters)


@dataclass(frozen=True)
class Subgraph:
    """Induced subgraph; local node ``k`` is parent node ``parent_nodes[k]``."""

    parent_nodes: tuple
    graph: Graph


def modularity(g: Graph, clusters: Sequence[Sequence[int]]) -> float:
    """Newman modularity (resolution 1) using absolute edge weights."""
    m = math.fsum(abs(w) for _, _, w in g.edges)
    if m == 0:
        return 0.0
    label = {}
    for k, c in enumerate(clusters):
        for v in c:
            label[v] = k
    inner = [0.0] * len(clusters)
    deg = [0.0] * len(clusters)
    for i, j, w in g.edges:
        w = abs(w)
        deg[label[i]] += w
        deg[label[j]] += w
        if label[i] == label[j]:
            inner[label[i]] += w
    return math.fsum(inner[k] / m - (deg[k] / (2 * m)) ** 2 for k in range(len(clusters)))


def greedy_modularity(g: Graph) -> Partition:
    """Clauset-Newman-Moore agglomeration.

    Starts from singletons and merges the adjacent pair with the largest
    modularity gain while that gain is positive. Ties go to the smallest
    ``(id, id)`` pair; a merged community keeps the smaller id. Edge weights
    enter through their absolute value so signed merge graphs can be split.
    """
    n = g.num_nodes
    if n < 1:
        raise ParameterError("graph has no nodes")
    two_m = 2.0 * math.fsum(abs(w) for _, _, w in g.edges)
    if two_m == 0:
        return Partition(tuple((v,) for v in range(n)), n)

    # e[a][b]: fraction of edge ends joining a and b (each direction stored)
    e = [dict() for _ in range(n)]
    a = [0.0] * n
    for i, j, w in g.edges:
        w = abs(w)
        if w == 0:
            continue
        e[i][j] = e[i].get(j, 0.0) + w / two_m
        e[j][i] = e[j].get(i, 0.0) + w / two_m
        a[i] += w / two_m
        a[j] += w / two_m
    members = {v: [v] for v in range(n)}
    version = [0] * n

    heap = []
    for i in range(n):
        for j, eij in e[i].items():
            if i < j:
                heap.append((-2.0 * (eij - a[i] * a[j]), i, j, 0, 0))
    heapq.heapify(heap)

    while heap:
        neg_dq, i, j, vi, vj = heapq.heappop(heap)
        if i not in members or j not in members or version[i] != vi or version[j] != vj:
            continue
        if -neg_dq <= 0.0:
            break
        # merge j into i (i < j)
        for k, ejk in e[j].items():
            if k == i:
                continue
            e[i][k] = e[i].get(k, 0.0) + ejk
            e[k][i] = e[i][k]
            del e[k][j]
        del e[i][j]
        e[j] = {}
        a[i] += a[j]
        a[j] = 0.0
        members[i].extend(members.pop(j))
        version[i] += 1
        for k, eik in e[i].items():
            lo, hi = (i, k) if i < k else (k, i)
            heapq.heappush(heap, (-2.0 * (eik - a[i] * a[k]), lo, hi, version[lo], version[hi]))

    return Partition.from_clusters(list(members.values()), n)


def induce_subgraphs(g: Graph, p: Partition) -> list:
    """One :class:`Subgraph` per cluster; cross-cluster edges are dropped."""
    labels = p.labels()
    local = {}
    for c in p.clusters:
        for k, v in enumerate(c):
            local[v] = k
    per_cluster = [[] for _ in p.clusters]
    for i, j, w in g.edges:
        if labels[i] == labels[j]:
            per_cluster[labels[i]].append((local[i], local[j], w))
    # local indices follow ascending parent order, so (i, j, w) stays canonical
    return [Subgraph(c, Graph(len(c), tuple(edges))) for c, edges in zip(p.clusters, per_cluster)]


def _induce_one(g: Graph, nodes: Sequence[int]) -> Graph:
    pos = {v: k for k, v in enumerate(nodes)}
    edges = tuple((pos[i], pos[j], w) for i, j, w in g.edges if i in pos and j in pos)
    return Graph(len(nodes), edges)


def _split(g: Graph, nodes: tuple, n_max: int) -> list:
    if len(nodes) <= n_max:
        return [nodes]
    sub = greedy_modularity(_induce_one(g, nodes))
    if len(sub.clusters) > 1:
        parts = [tuple(nodes[k] for k in c) for c in sub.clusters]
    else:
        half = len(nodes) // 2
        parts = [nodes[:half], nodes[half:]]
    out = []
    for part in parts:
        out.extend(_split(g, part, n_max))
    return out


def enforce_size_cap(g: Graph, p: Partition, n_max: int) -> Partition:
    """Re-split every cluster larger than ``n_max``.

    Oversized clusters are re-partitioned with :func:`greedy_modularity` on
    their induced subgraph, recursively. When modularity keeps the cluster
    whole, it is bisected by ascending node index.
    """
    if n_max < 2:
        raise ParameterError("n_max must be >= 2")
    if all(len(c) <= n_max for c in p.clusters):
        return p
    out = []
    for c in p.clusters:
        out.extend(_split(g, tuple(c), n_max))
    return Partition.from_clusters(out, p.num_nodes)


def coarsen(p: Partition, n_max: int) -> Partition:
    """Pack clusters first-fit-decreasing into bins of capacity ``n_max``.

    Applied only when a partition has more than ``ceil(N/2)`` clusters, which
    happens for graphs with many isolated nodes. First-fit leaves at most one
    bin at half capacity or less, so the result has at most ``ceil(N/2)``
    clusters and the divide-and-conquer recursion shrinks every level.
    """
    n = p.num_nodes
    if len(p.clusters) <= math.ceil(n / 2):
        return p
    bins = []
    for c in sorted(p.clusters, key=lambda c: (-len(c), c[0])):
        for b in bins:
            if len(b) + len(c) <= n_max:
                b.extend(c)
                break
        else:
            bins.append(list(c))
    return Partition.from_clusters(bins, n)


def partition_graph(g: Graph, n_max: int) -> Partition:
    """Greedy modularity, size cap, then coarsening if needed."""
    p = enforce_size_cap(g, greedy_modularity(g), n_max)
    return coarsen(p, n_max)


def predicted_subgraph_count(num_nodes: int, qubits: int, levels: int) -> float:
    """Sub-graphs across ``levels``: sum of N/n^k for k = 1..levels."""
    if num_nodes < 1 or qubits < 2 or levels < 1:
        raise ParameterError("need N >= 1, n >= 2, a >= 1")
    na = float(qubits) ** levels
    return num_nodes * (na - 1) / (na * (qubits - 1))


def level_estimate(num_nodes: int, qubits: int) -> int:
    """Levels ``ceil(log_n N) - 1`` such that the top level fits ``n`` qubits."""
    if num_nodes < 1 or qubits < 2:
        raise ParameterError("need N >= 1, n >= 2")
    # integer ceil(log_n N), immune to float log error at exact powers
    k, power = 0, 1
    while power < num_nodes:
        power *= qubits
        k += 1
    return k - 1
