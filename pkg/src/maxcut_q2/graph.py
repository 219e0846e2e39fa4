"""Weighted undirected graphs, cut evaluation and the brute-force oracle.

Spins are ``+1``/``-1`` and map to bits as ``+1 <-> 0``, ``-1 <-> 1``; bit ``k``
of a basis index is node ``k`` (little-endian).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import DimensionError, ParameterError, ParseError, SizeError
from .seeding import make_rng

BRUTE_FORCE_CAP = 24
_CHUNK = 1 << 20


@dataclass(frozen=True)
class Graph:
    """Undirected graph on nodes ``0..num_nodes-1``.

    ``edges`` is a sorted tuple of ``(i, j, w)`` with ``i < j``. Build through
    :meth:`from_edges` to get canonical ordering and validation.
    """

    num_nodes: int
    edges: tuple = field(default=())

    def __post_init__(self):
        if self.num_nodes < 0:
            raise ParameterError("num_nodes must be non-negative")
        prev = None
        for i, j, w in self.edges:
            if not (0 <= i < j < self.num_nodes):
                raise ParameterError(f"edge ({i}, {j}) is not canonical for {self.num_nodes} nodes")
            if not math.isfinite(w):
                raise ParameterError(f"edge ({i}, {j}) has non-finite weight {w}")
            if prev is not None and (i, j) <= prev:
                raise ParameterError(f"edge ({i}, {j}) duplicated or out of order")
            prev = (i, j)

    @classmethod
    def from_edges(cls, num_nodes: int, edges: Iterable[Sequence]) -> "Graph":
        """Canonicalize ``(i, j[, w])`` triples; weight defaults to 1."""
        canon = {}
        for e in edges:
            i, j = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            if i == j:
                raise ParameterError(f"self-loop on node {i}")
            if i > j:
                i, j = j, i
            if (i, j) in canon:
                raise ParameterError(f"duplicate edge ({i}, {j})")
            canon[(i, j)] = w
        return cls(int(num_nodes), tuple((i, j, w) for (i, j), w in sorted(canon.items())))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def arrays(self):
        """``(src, dst, w)`` as contiguous int64/int64/float64 arrays."""
        if not self.edges:
            return (np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0, np.float64))
        src, dst, w = zip(*self.edges)
        return (
            np.ascontiguousarray(src, dtype=np.int64),
            np.ascontiguousarray(dst, dtype=np.int64),
            np.ascontiguousarray(w, dtype=np.float64),
        )

    @cached_property
    def csr(self):
        """Symmetric adjacency as ``(indptr, indices, weights)``."""
        src, dst, w = self.arrays
        rows = np.concatenate([src, dst])
        cols = np.concatenate([dst, src])
        vals = np.concatenate([w, w])
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        indptr = np.zeros(self.num_nodes + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        return np.cumsum(indptr), np.ascontiguousarray(cols), np.ascontiguousarray(vals)

    @property
    def total_weight(self) -> float:
        return math.fsum(w for _, _, w in self.edges)

    @property
    def density(self) -> float:
        n = self.num_nodes
        return 0.0 if n < 2 else self.num_edges / (n * (n - 1) / 2)

    @property
    def is_weighted(self) -> bool:
        return any(w != 1.0 for _, _, w in self.edges)


def erdos_renyi(n: int, p_edge: float, weighted: bool = False, seed: int = 0) -> Graph:
    """G(n, p) with unit weights, or weights uniform in [0, 1] if ``weighted``."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    if not (0.0 <= p_edge <= 1.0):
        raise ParameterError(f"edge probability {p_edge} outside [0, 1]")
    rng = make_rng("erdos_renyi", n, float(p_edge), bool(weighted), int(seed))
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p_edge
    weights = rng.random(iu.size) if weighted else np.ones(iu.size)
    edges = tuple(
        (int(i), int(j), float(w)) for i, j, w in zip(iu[keep], ju[keep], weights[keep])
    )
    return Graph(n, edges)


def _check_length(g: Graph, spins) -> np.ndarray:
    s = np.asarray(spins)
    if s.shape != (g.num_nodes,):
        raise DimensionError(f"assignment has shape {s.shape}, graph has {g.num_nodes} nodes")
    return s


def cut_value(g: Graph, spins) -> float:
    """Total weight of edges whose endpoints carry different spins."""
    s = _check_length(g, spins)
    if not g.edges:
        return 0.0
    src, dst, w = g.arrays
    return float(np.sum(w[s[src] != s[dst]]))


def index_to_spins(index: int, n: int) -> np.ndarray:
    bits = (int(index) >> np.arange(n)) & 1
    return (1 - 2 * bits).astype(np.int8)


def spins_to_index(spins) -> int:
    bits = (np.asarray(spins) < 0).astype(np.int64)
    return int(np.sum(bits << np.arange(bits.size, dtype=np.int64)))


def spins_to_bitstring(spins) -> str:
    """Character ``k`` is node ``k``: ``'0'`` for +1, ``'1'`` for -1."""
    return "".join("1" if s < 0 else "0" for s in np.asarray(spins))


def bitstring_to_spins(bits: str) -> np.ndarray:
    return np.array([-1 if c == "1" else 1 for c in bits], dtype=np.int8)


def brute_force_maxcut(g: Graph):
    """Exact MaxCut by enumeration; returns ``(spins, value)``.

    Ties go to the smallest basis index. Only indices with the top bit clear
    are scanned, which is enough because flipping every spin keeps the cut and
    always yields a larger index.
    """
    n = g.num_nodes
    if n > BRUTE_FORCE_CAP:
        raise SizeError(f"brute force limited to {BRUTE_FORCE_CAP} nodes, got {n}")
    if n <= 1:
        return np.ones(n, dtype=np.int8), 0.0
    src, dst, w = g.arrays
    half = 1 << (n - 1)
    best_idx, best_val = 0, -math.inf
    for start in range(0, half, _CHUNK):
        count = min(_CHUNK, half - start)
        vals = kernels.cost_diagonal(n, src, dst, w, start, count)
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_idx, best_val = start + k, float(vals[k])
    spins = index_to_spins(best_idx, n)
    return spins, cut_value(g, spins)


def serialize_graph(g: Graph) -> str:
    lines = [f"nodes={g.num_nodes}"]
    lines.extend(f"{i} {j} {w:.17g}" for i, j, w in g.edges)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse the ``nodes=N`` + ``i j w`` edge-list format (``#`` comments)."""
    num_nodes = None
    edges = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if num_nodes is None:
            key, _, val = line.partition("=")
            if key.strip() != "nodes" or not val.strip():
                raise ParseError("expected header 'nodes=<N>'", lineno)
            try:
                num_nodes = int(val)
            except ValueError:
                raise ParseError(f"bad node count {val.strip()!r}", lineno) from None
            if num_nodes < 0:
                raise ParseError("node count must be non-negative", lineno)
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected '<i> <j> <w>', got {line!r}", lineno)
        try:
            i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise ParseError(f"malformed edge {line!r}", lineno) from None
        if not math.isfinite(w):
            raise ParseError(f"non-finite weight {parts[2]}", lineno)
        if i == j:
            raise ParseError(f"self-loop on node {i}", lineno)
        if min(i, j) < 0 or max(i, j) >= num_nodes:
            raise ParseError(f"node index out of range for {num_nodes} nodes", lineno)
        key = (min(i, j), max(i, j))
        if key in edges:
            raise ParseError(f"duplicate edge {key}", lineno)
        edges[key] = w
    if num_nodes is None:
        raise ParseError("missing 'nodes=<N>' header", 1)
    return Graph(num_nodes, tuple((i, j, w) for (i, j), w in sorted(edges.items())))


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_graph(g))
