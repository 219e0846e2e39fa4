import cvxpy as cp
import numpy as np
import pytest

from maxcut_q2.errors import ParameterError
from maxcut_q2.graph import Graph, brute_force_maxcut, cut_value, erdos_renyi
from maxcut_q2.gw import (
    GramFactor,
    embedding_dim,
    gw_solve,
    hyperplane_round,
    relaxation_value,
    solve_sdp,
)

K5 = Graph.from_edges(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])


def reference_sdp(g):
    """Generic interior-point/SCS solution of the same relaxation."""
    n = g.num_nodes
    W = np.zeros((n, n))
    for i, j, w in g.edges:
        W[i, j] = W[j, i] = w
    X = cp.Variable((n, n), PSD=True)
    prob = cp.Problem(cp.Maximize(0.25 * cp.sum(cp.multiply(W, 1 - X))), [cp.diag(X) == 1])
    prob.solve()
    return prob.value


def test_sdp_examples(single_edge, triangle, square):
    assert solve_sdp(single_edge).objective == pytest.approx(1.0, abs=1e-4)
    assert solve_sdp(triangle).objective == pytest.approx(2.25, abs=1e-3)
    assert solve_sdp(square).objective == pytest.approx(4.0, abs=1e-3)


def test_sdp_matches_generic_solver():
    for s in range(6):
        g = erdos_renyi(10, 0.4, weighted=bool(s % 2), seed=s)
        assert solve_sdp(g, seed=s).objective == pytest.approx(reference_sdp(g), rel=1e-3)


def test_factor_invariants():
    g = erdos_renyi(14, 0.3, seed=1)
    f = solve_sdp(g)
    assert f.vectors.shape == (14, embedding_dim(14))
    np.testing.assert_allclose(np.linalg.norm(f.vectors, axis=1), 1.0, atol=1e-7)
    gram = f.vectors @ f.vectors.T
    assert np.min(np.linalg.eigvalsh(gram)) > -1e-9
    assert f.objective == pytest.approx(relaxation_value(g, f.vectors))


def test_sdp_upper_bounds_optimum():
    for s in range(20):
        g = erdos_renyi(6 + s % 9, 0.4, weighted=bool(s % 3 == 0), seed=100 + s)
        opt = brute_force_maxcut(g)[1]
        assert solve_sdp(g, seed=s).objective >= opt - 1e-3 * abs(opt)


def test_rounding_antipodal_and_identical(single_edge):
    anti = GramFactor(np.array([[1.0, 0.0], [-1.0, 0.0]]), 1.0)
    assert all(hyperplane_round(anti, single_edge, seed=s)[1] == 1 for s in range(50))
    same = GramFactor(np.array([[0.6, 0.8], [0.6, 0.8]]), 0.0)
    assert all(hyperplane_round(same, single_edge, seed=s)[1] == 0 for s in range(50))


def test_rounding_triangle_expected_cut(triangle):
    angles = 2 * np.pi * np.arange(3) / 3
    f = GramFactor(np.column_stack([np.cos(angles), np.sin(angles)]), 2.25)
    cuts = [hyperplane_round(f, triangle, seed=s)[1] for s in range(2000)]
    # arccos(-1/2) / pi = 2/3 per edge
    assert np.mean(cuts) == pytest.approx(3 * 2 / 3)


def test_rounding_edge_frequencies():
    rng = np.random.default_rng(7)
    V = rng.standard_normal((5, 3))
    V /= np.linalg.norm(V, axis=1)[:, None]
    f = GramFactor(V, 0.0)
    trials = 100_000
    hits = np.zeros(len(K5.edges))
    src, dst, _ = K5.arrays
    for s in range(trials):
        spins, _ = hyperplane_round(f, K5, seed=s)
        hits += spins[src] != spins[dst]
    prob = np.arccos(np.clip(np.einsum("ij,ij->i", V[src], V[dst]), -1, 1)) / np.pi
    sigma = np.sqrt(prob * (1 - prob) / trials)
    assert np.all(np.abs(hits / trials - prob) <= 3 * sigma + 1e-12)


def test_gw_solve_examples(single_edge):
    r = gw_solve(single_edge, seed=0)
    assert r.average_cut == r.best_cut == 1.0
    e = gw_solve(Graph(4), seed=0)
    assert e.average_cut == e.best_cut == 0.0


def test_gw_solve_invariants_and_determinism():
    g = erdos_renyi(12, 0.5, weighted=True, seed=3)
    a, b = gw_solve(g, seed=9), gw_solve(g, seed=9)
    assert a.to_record() == b.to_record() and a.cuts == b.cuts
    assert a.rounds == 30 == len(a.cuts)
    assert a.average_cut <= a.best_cut <= a.sdp_objective + 1e-3 * (1 + abs(a.sdp_objective))
    assert a.best_cut == cut_value(g, a.best_assignment)


def test_gw_ratio_on_small_graphs():
    for s in range(10):
        g = erdos_renyi(8 + s % 7, 0.3 if s % 2 else 0.5, seed=200 + s)
        opt = brute_force_maxcut(g)[1]
        assert gw_solve(g, seed=s).best_cut >= 0.878 * opt


def test_gw_handles_signed_weights():
    g = Graph.from_edges(4, [(0, 1, -1.0), (1, 2, 2.0), (2, 3, -0.5), (0, 3, 1.5)])
    opt = brute_force_maxcut(g)[1]
    r = gw_solve(g, seed=1)
    assert r.sdp_objective >= opt - 1e-3 * abs(opt)
    assert r.best_cut == pytest.approx(opt)


def test_parameter_errors(single_edge):
    with pytest.raises(ParameterError):
        gw_solve(single_edge, rounds=0)
    with pytest.raises(ParameterError):
        hyperplane_round(GramFactor(np.ones((3, 2)), 0.0), single_edge)
