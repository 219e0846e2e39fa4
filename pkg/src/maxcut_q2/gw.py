"""Goemans-Williamson MaxCut via a low-rank (Burer-Monteiro) SDP factorization."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import ParameterError, SolverNumericError
from .graph import Graph, cut_value, spins_to_bitstring
from .seeding import derive_seed, make_rng

DEFAULT_ROUNDS = 30
DEFAULT_RESTARTS = 3
DEFAULT_TOL = 1e-6
MIN_SWEEPS = 1000


@dataclass
class GramFactor:
    """Unit row vectors ``V`` (N x k) and the relaxation value they reach."""

    vectors: np.ndarray
    objective: float
    sweeps: int = 0


@dataclass
class GwResult:
    average_cut: float
    best_cut: float
    best_assignment: np.ndarray
    rounds: int
    sdp_objective: float
    restarts: int
    cuts: list
    elapsed: float = 0.0

    def to_record(self) -> dict:
        return {
            "sdp_objective": self.sdp_objective,
            "average_cut": self.average_cut,
            "best_cut": self.best_cut,
            "bitstring": spins_to_bitstring(self.best_assignment),
            "rounds": self.rounds,
            "restarts": self.restarts,
        }


def embedding_dim(num_nodes: int) -> int:
    return math.ceil(math.sqrt(2 * num_nodes)) + 1


def _adjacency(g: Graph):
    indptr, indices, weights = g.csr
    return sparse.csr_matrix((weights, indices, indptr), shape=(g.num_nodes, g.num_nodes))


def relaxation_value(g: Graph, vectors: np.ndarray) -> float:
    """``1/4 sum_ij w_ij (1 - v_i . v_j)`` over ordered pairs (1/2 per edge)."""
    if not g.edges:
        return 0.0
    src, dst, w = g.arrays
    dots = np.einsum("ij,ij->i", vectors[src], vectors[dst])
    return 0.5 * float(np.sum(w * (1.0 - dots)))


def _normalize_rows(v):
    norms = np.linalg.norm(v, axis=1)
    if not np.all(np.isfinite(norms)) or np.any(norms == 0):
        raise SolverNumericError("degenerate row in SDP factor")
    return v / norms[:, None]


def _ascend(W, total, V, step, tol, max_sweeps):
    """Riemannian gradient ascent on the product of spheres."""
    prev = None
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        WV = W @ V
        f = 0.5 * (total - 0.5 * float(np.sum(V * WV)))
        if not math.isfinite(f):
            raise SolverNumericError("non-finite SDP objective")
        if prev is not None and f - prev < tol * max(abs(prev), 1e-12):
            break
        prev = f
        grad = -0.5 * WV
        radial = np.einsum("ij,ij->i", grad, V)
        rgrad = grad - radial[:, None] * V
        if not np.all(np.isfinite(rgrad)):
            raise SolverNumericError("non-finite gradient")
        V = _normalize_rows(V + step[:, None] * rgrad)
    return V, sweeps


def solve_sdp(g: Graph, tol: float = DEFAULT_TOL, seed: int = 0,
              restarts: int = DEFAULT_RESTARTS, max_sweeps=None) -> GramFactor:
    """Maximize the MaxCut relaxation over unit vectors of dimension ceil(sqrt(2N))+1.

    Each row moves along its tangent-space gradient with step
    ``1 / L_i``, ``L_i = sum_j |w_ij|``, then is renormalized. A restart stops
    when the relative gain over a sweep drops below ``tol``; the best of
    ``restarts`` random starts is kept.
    """
    n = g.num_nodes
    if n < 1:
        raise ParameterError("graph has no nodes")
    if restarts < 1:
        raise ParameterError("restarts must be >= 1")
    k = embedding_dim(n)
    if max_sweeps is None:
        max_sweeps = max(50 * n, MIN_SWEEPS)
    W = _adjacency(g)
    total = g.total_weight
    row_abs = np.asarray(abs(W).sum(axis=1)).ravel()
    step = np.divide(1.0, row_abs, out=np.zeros(n), where=row_abs > 0)

    best = None
    for r in range(restarts):
        rng = make_rng("gw-sdp", seed, r)
        V = _normalize_rows(rng.standard_normal((n, k)))
        if g.edges:
            V, sweeps = _ascend(W, total, V, step, tol, max_sweeps)
        else:
            sweeps = 0
        f = relaxation_value(g, V)
        if best is None or f > best.objective:
            best = GramFactor(V, f, sweeps)
    return best


def hyperplane_round(factor: GramFactor, g: Graph, seed: int = 0):
    """Spins from the side of a random Gaussian hyperplane; 0 maps to +1."""
    V = factor.vectors
    if V.shape[0] != g.num_nodes:
        raise ParameterError(f"factor has {V.shape[0]} rows for {g.num_nodes} nodes")
    r = make_rng("gw-round", seed).standard_normal(V.shape[1])
    spins = np.where(V @ r >= 0.0, 1, -1).astype(np.int8)
    return spins, cut_value(g, spins)


def gw_solve(g: Graph, rounds: int = DEFAULT_ROUNDS, seed: int = 0,
             tol: float = DEFAULT_TOL, restarts: int = DEFAULT_RESTARTS) -> GwResult:
    """Solve the relaxation once and round it ``rounds`` times."""
    if rounds < 1:
        raise ParameterError("rounds must be >= 1")
    t0 = time.perf_counter()
    factor = solve_sdp(g, tol=tol, seed=seed, restarts=restarts)
    cuts = []
    best_spins, best_cut = None, -math.inf
    for t in range(rounds):
        spins, cut = hyperplane_round(factor, g, seed=derive_seed(seed, "round", t))
        cuts.append(cut)
        if cut > best_cut:
            best_spins, best_cut = spins, cut
    return GwResult(
        average_cut=math.fsum(cuts) / rounds,
        best_cut=best_cut,
        best_assignment=best_spins,
        rounds=rounds,
        sdp_objective=factor.objective,
        restarts=restarts,
        cuts=cuts,
        elapsed=time.perf_counter() - t0,
    )
