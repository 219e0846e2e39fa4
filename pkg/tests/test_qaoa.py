import math

import numpy as np
import pytest

from maxcut_q2.errors import DimensionError, ParameterError, SizeError
from maxcut_q2.graph import Graph, cut_value, erdos_renyi, index_to_spins
from maxcut_q2.qaoa import (
    QaoaConfig,
    apply_ansatz,
    build_cost_diagonal,
    expectation,
    extract_solution,
    iteration_schedule,
    optimize,
)
from oracles import dense_qaoa_state


def test_cost_diagonal_examples(single_edge, triangle):
    assert build_cost_diagonal(single_edge).tolist() == [0, 1, 1, 0]
    assert build_cost_diagonal(triangle).tolist() == [0, 2, 2, 2, 2, 2, 2, 0]


def test_cost_diagonal_invariants():
    g = erdos_renyi(10, 0.4, weighted=True, seed=1)
    c = build_cost_diagonal(g)
    full = (1 << 10) - 1
    assert c[0] == 0 and c[full] == 0
    np.testing.assert_allclose(c, c[full - np.arange(c.size)], atol=1e-12)
    rng = np.random.default_rng(5)
    for b in rng.integers(0, 1 << 10, 100):
        assert c[b] == pytest.approx(cut_value(g, index_to_spins(b, 10)), abs=1e-12)


def test_cost_diagonal_cap():
    with pytest.raises(SizeError):
        build_cost_diagonal(Graph(34))


def test_ansatz_identity_cases(triangle):
    c = build_cost_diagonal(triangle)
    uniform = np.full(8, 8 ** -0.5)
    np.testing.assert_allclose(apply_ansatz(c, [], []), uniform, atol=1e-15)
    np.testing.assert_allclose(apply_ansatz(c, [0, 0, 0], [0, 0, 0]), uniform, atol=1e-15)


def test_ansatz_single_edge_dense_oracle(single_edge):
    ours = apply_ansatz(build_cost_diagonal(single_edge), [0.7], [0.3])
    ref = dense_qaoa_state(2, single_edge.edges, [0.7], [0.3])
    assert np.max(np.abs(ours - ref)) < 1e-8


def test_ansatz_matches_dense_oracle_random():
    rng = np.random.default_rng(0)
    for s in range(15):
        n = 1 + s % 6
        g = erdos_renyi(n, 0.6, weighted=True, seed=s)
        p = 1 + s % 2
        gam, bet = rng.uniform(-np.pi, np.pi, p), rng.uniform(-np.pi, np.pi, p)
        ours = apply_ansatz(build_cost_diagonal(g), gam, bet)
        assert np.max(np.abs(ours - dense_qaoa_state(n, g.edges, gam, bet))) < 1e-8


def test_ansatz_norm_and_flip_symmetry():
    g = erdos_renyi(9, 0.5, weighted=True, seed=4)
    c = build_cost_diagonal(g)
    rng = np.random.default_rng(1)
    gam, bet = rng.uniform(0, np.pi, 4), rng.uniform(0, np.pi, 4)
    for p in range(1, 5):
        sv = apply_ansatz(c, gam[:p], bet[:p])
        assert abs(np.sum(np.abs(sv) ** 2) - 1) < 1e-9
    mags = np.abs(sv)
    np.testing.assert_allclose(mags, mags[::-1], atol=1e-12)


def test_ansatz_length_mismatch(triangle):
    with pytest.raises(DimensionError):
        apply_ansatz(build_cost_diagonal(triangle), [0.1, 0.2], [0.1])


def test_expectation_examples(triangle, single_edge):
    c = build_cost_diagonal(triangle)
    assert expectation(apply_ansatz(c, [], []), c) == pytest.approx(1.5, abs=1e-12)
    basis = np.zeros(4, dtype=complex)
    basis[1] = 1.0
    assert expectation(basis, build_cost_diagonal(single_edge)) == 1.0


def test_sampled_expectation_uniform_triangle(triangle):
    c = build_cost_diagonal(triangle)
    sv = apply_ansatz(c, [], [])
    # cost is 0 w.p. 1/4 and 2 w.p. 3/4: sd = sqrt(3)/2 per shot
    sd = math.sqrt(0.75 * 4 - 1.5 ** 2)
    for seed in range(5):
        est = expectation(sv, c, mode="sampled", shots=4096, seed=seed)
        assert abs(est - 1.5) < 4 * sd / math.sqrt(4096)


def test_uniform_expectation_is_half_total_weight():
    for s in range(20):
        g = erdos_renyi(8, 0.5, weighted=True, seed=s)
        c = build_cost_diagonal(g)
        assert expectation(apply_ansatz(c, [], []), c) == pytest.approx(g.total_weight / 2, abs=1e-10)


def test_extract_solution_examples(triangle):
    sv = np.zeros(8, dtype=complex)
    sv[5] = 1.0
    assert extract_solution(sv, triangle).tolist() == [-1, 1, -1]
    uniform = apply_ansatz(build_cost_diagonal(triangle), [], [])
    assert extract_solution(uniform, triangle).tolist() == [1, 1, 1]
    pair = np.zeros(8, dtype=complex)
    pair[[2, 5]] = 2 ** -0.5
    spins = extract_solution(pair, triangle)
    assert spins.tolist() == index_to_spins(2, 3).tolist()
    assert cut_value(triangle, spins) == cut_value(triangle, index_to_spins(5, 3))


def test_single_edge_landscape_reaches_certainty(single_edge):
    # dense-oracle grid scan: some (gamma, beta) puts all mass on 01/10
    best = max(
        np.abs(dense_qaoa_state(2, single_edge.edges, [g], [b])[[1, 2]]).__pow__(2).sum()
        for g in np.linspace(0, np.pi, 41) for b in np.linspace(0, np.pi / 2, 41)
    )
    assert best > 0.999


@pytest.mark.parametrize("mode", ["exact", "sampled"])
def test_optimize_single_edge(single_edge, mode):
    res = optimize(single_edge, QaoaConfig(p=1, rhobeg=0.5, max_iters=60, seed=3, expectation_mode=mode))
    assert res.cut == 1.0
    assert res.iterations_used <= 60 and len(res.objective_trace) == res.iterations_used


def test_optimize_edgeless():
    res = optimize(Graph(4), QaoaConfig(p=2, seed=1))
    assert res.cut == 0 and res.iterations_used == 0
    assert res.assignment.tolist() == [1, 1, 1, 1]


def test_optimize_deterministic():
    g = erdos_renyi(8, 0.4, seed=2)
    cfg = QaoaConfig(p=3, rhobeg=0.3, seed=11)
    a, b = optimize(g, cfg), optimize(g, cfg)
    assert a.objective_trace == b.objective_trace
    assert a.to_record() == b.to_record()


def test_optimize_result_invariants():
    g = erdos_renyi(9, 0.4, weighted=True, seed=6)
    res = optimize(g, QaoaConfig(p=3, rhobeg=0.4, seed=2, expectation_mode="exact"))
    assert res.cut == cut_value(g, res.assignment)
    assert len(res.objective_trace) <= iteration_schedule(3)
    best_so_far = np.maximum.accumulate(res.objective_trace)
    assert np.all(np.diff(best_so_far) >= 0)
    # optimized angles beat the uniform state
    assert max(res.objective_trace) > g.total_weight / 2
    rec = res.to_record()
    assert set(rec) >= {"p", "rhobeg", "seed", "angles", "trace", "bitstring", "cut", "iterations"}
    assert len(rec["angles"]["gamma"]) == 3


def test_iteration_schedule():
    assert [iteration_schedule(p) for p in range(3, 9)] == [30, 44, 58, 72, 86, 100]


def test_config_validation():
    with pytest.raises(ParameterError):
        QaoaConfig(p=0)
    with pytest.raises(ParameterError):
        QaoaConfig(rhobeg=0)
    with pytest.raises(ParameterError):
        QaoaConfig(max_iters=0)
    with pytest.raises(ParameterError):
        QaoaConfig(shots=0)
