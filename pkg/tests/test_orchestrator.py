import json
import threading

import pytest

from maxcut_q2.errors import DispatchError, InputError, ParameterError
from maxcut_q2.graph import Graph, erdos_renyi
from maxcut_q2.orchestrator import (
    CLASSICAL,
    SolverPolicy,
    dispatch,
    load_policy,
    plan,
    run_parallel,
    select_best,
)
from maxcut_q2.partition import induce_subgraphs, partition_graph
from maxcut_q2.qaoa import QaoaConfig
from maxcut_q2.solvers import SolveRecord

FAST = QaoaConfig(p=2, rhobeg=0.5, max_iters=20, shots=256)
RULES = {"kind": "rule_based",
         "rules": [{"max_density": 0.15, "solver": "qaoa", "p": 6, "rhobeg": 0.5}, {"default": "gw"}]}


@pytest.fixture(scope="module")
def subgraphs():
    g = erdos_renyi(40, 0.2, weighted=True, seed=1)
    return induce_subgraphs(g, partition_graph(g, 8))


def rec(solver, cut, cluster=0, n=3):
    import numpy as np
    return SolveRecord(solver, np.ones(n, dtype=np.int8), cut, cluster=cluster)


def test_plan_counts(subgraphs):
    three = subgraphs[:3]
    assert [t.solver for t in plan(three, SolverPolicy("all_gw"), 0).tasks] == ["gw"] * 3
    tasks = plan(three, SolverPolicy("best_of"), 0).tasks
    assert [(t.cluster, t.solver) for t in tasks] == [(k, s) for k in range(3) for s in ("qaoa", "gw")]
    with pytest.raises(InputError):
        plan([], SolverPolicy("all_gw"), 0)


def test_plan_seeds_distinct_and_stable(subgraphs):
    a = plan(subgraphs, SolverPolicy("best_of"), 42)
    b = plan(subgraphs, SolverPolicy("best_of"), 42)
    assert [t.seed for t in a.tasks] == [t.seed for t in b.tasks]
    assert len({t.seed for t in a.tasks}) == len(a.tasks)


def test_rule_based_plan(subgraphs):
    policy = load_policy(RULES)
    for t in plan(subgraphs, policy, 0).tasks:
        if t.subgraph.graph.density < 0.15:
            assert t.solver == "qaoa" and t.config.p == 6 and t.config.rhobeg == 0.5
        else:
            assert t.solver == "gw"


def test_rule_table_needs_default():
    with pytest.raises(ParameterError):
        load_policy({"kind": "rule_based", "rules": [{"max_density": 0.1, "solver": "qaoa"}]})
    with pytest.raises(ParameterError):
        load_policy({"kind": "rule_based", "rules": [{"default": "annealer"}]})
    with pytest.raises(ParameterError):
        load_policy("no-such-policy")


def test_load_policy_file(tmp_path):
    path = tmp_path / "policy.json"
    path.write_text(json.dumps(RULES))
    assert load_policy(str(path)) == load_policy(RULES)
    assert load_policy("best_of").kind == "best_of"


def test_classical_policy():
    small, big = Graph(20), Graph(21)
    assert CLASSICAL.choose(small, FAST)[0][0] == "exact"
    assert CLASSICAL.choose(big, FAST)[0][0] == "gw"


def test_dispatch_pool_independence(subgraphs):
    p = plan(subgraphs, SolverPolicy("best_of"), 3, FAST)
    one = dispatch(p, workers=1)
    eight = dispatch(p, workers=8)
    assert [r.to_record(timings=False) for r in one] == [r.to_record(timings=False) for r in eight]
    assert [r.cluster for r in one] == list(range(len(subgraphs)))


def test_dispatch_best_of_selection(subgraphs):
    both = plan(subgraphs, SolverPolicy("best_of"), 3, FAST)
    q = dispatch(plan(subgraphs, SolverPolicy("all_qaoa"), 3, FAST), workers=2)
    g = dispatch(plan(subgraphs, SolverPolicy("all_gw"), 3, FAST), workers=2)
    # per-task seeds depend only on (base seed, cluster, solver), so runs line up
    for chosen, rq, rg in zip(dispatch(both, workers=2), q, g):
        assert chosen.cut == max(rq.cut, rg.cut)
        assert chosen.solver == ("qaoa" if rq.cut > rg.cut else "gw")


def test_dispatch_five_clusters_pool_two(subgraphs):
    out = dispatch(plan(subgraphs[:5], SolverPolicy("all_gw"), 0), workers=2)
    assert [r.cluster for r in out] == [0, 1, 2, 3, 4]


def test_select_best_rules():
    assert select_best(rec("qaoa", 5), rec("gw", 4)).solver == "qaoa"
    assert select_best(rec("qaoa", 4), rec("gw", 4)).solver == "gw"
    assert select_best(rec("qaoa", 4.0), rec("gw", 4.5)).solver == "gw"
    with pytest.raises(InputError):
        select_best(rec("qaoa", 1, cluster=0), rec("gw", 1, cluster=1))


def test_task_failure_identifies_cluster(subgraphs):
    bad = plan(subgraphs[:4], SolverPolicy.from_dict({"rules": [{"default": "exact"}]}), 0)
    # swap in an oversize graph for cluster 2 so brute force refuses it
    tasks = list(bad.tasks)
    big = type(tasks[2].subgraph)(tuple(range(30)), Graph(30))
    tasks[2] = type(tasks[2])(2, big, "exact", tasks[2].config, tasks[2].seed)
    broken = type(bad)(tuple(tasks), bad.num_clusters, bad.policy)
    for workers in (1, 3):
        with pytest.raises(DispatchError) as info:
            dispatch(broken, workers=workers)
        assert info.value.cluster == 2
        assert info.value.exit_code == 3


def test_run_parallel_preserves_order_and_uses_threads():
    seen = set()

    def f(x):
        seen.add(threading.get_ident())
        return x * x

    assert run_parallel(f, range(20), workers=4) == [x * x for x in range(20)]
    with pytest.raises(ParameterError):
        run_parallel(f, [1], workers=0)
