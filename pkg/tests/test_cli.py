import json

import pytest

from maxcut_q2.cli import TRACE_HEADER, main
from maxcut_q2.graph import erdos_renyi, read_graph, write_graph


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "g.txt"
    write_graph(erdos_renyi(24, 0.25, weighted=True, seed=3), path)
    return path


def test_gen_round_trip(tmp_path):
    out = tmp_path / "gen.txt"
    assert main(["gen", "--nodes", "10", "--p-edge", "0.4", "--seed", "2", "--out", str(out)]) == 0
    assert read_graph(out) == erdos_renyi(10, 0.4, seed=2)


@pytest.mark.parametrize("solver", ["gw", "random", "exact", "qaoa"])
def test_solve(graph_file, tmp_path, capsys, solver):
    small = tmp_path / "small.txt"
    write_graph(erdos_renyi(8, 0.5, seed=1), small)
    assert main(["solve", "--graph", str(small), "--solver", solver, "--p", "1", "--iters", "10"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["solver"] == solver and len(rec["bitstring"]) == 8


def test_solve_exact_too_large(tmp_path):
    path = tmp_path / "big.txt"
    write_graph(erdos_renyi(30, 0.1, seed=0), path)
    assert main(["solve", "--graph", str(path), "--solver", "exact"]) == 3


def test_bad_inputs(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("nodes=2\n0 0 1\n")
    assert main(["solve", "--graph", str(bad), "--solver", "gw"]) == 2
    assert main(["solve", "--graph", str(tmp_path / "missing"), "--solver", "gw"]) == 2
    assert main(["gen", "--nodes", "5", "--p-edge", "2"]) == 2


def test_qaoa2_outputs(graph_file, tmp_path):
    out, js, part = tmp_path / "t.csv", tmp_path / "r.json", tmp_path / "p.txt"
    args = ["qaoa2", "--graph", str(graph_file), "--n-max", "6", "--policy", "all_gw",
            "--out", str(out), "--json", str(js), "--dump-partition", str(part)]
    assert main(args) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(TRACE_HEADER) and len(lines) >= 2
    summary = json.loads(js.read_text())
    assert float(lines[1].split(",")[-1]) == summary["cut"]
    clusters = [list(map(int, l.split())) for l in part.read_text().splitlines()]
    assert sorted(x for c in clusters for x in c) == list(range(24))


def test_qaoa2_worker_independence(graph_file, tmp_path):
    outs = []
    for w in (1, 8):
        out = tmp_path / f"t{w}.csv"
        assert main(["qaoa2", "--graph", str(graph_file), "--n-max", "8", "--policy", "best_of",
                     "--p", "2", "--iters", "15", "--shots", "256", "--workers", str(w),
                     "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_qaoa2_policy_file(graph_file, tmp_path):
    pol = tmp_path / "pol.json"
    pol.write_text(json.dumps({"kind": "rule_based", "rules": [
        {"max_density": 0.15, "solver": "qaoa", "p": 2}, {"default": "gw"}]}))
    assert main(["qaoa2", "--graph", str(graph_file), "--n-max", "8", "--policy", str(pol),
                 "--iters", "10", "--out", str(tmp_path / "t.csv")]) == 0
    assert main(["qaoa2", "--graph", str(graph_file), "--n-max", "1"]) == 2


def test_gridsearch_and_compare(tmp_path):
    cfg = tmp_path / "grid.json"
    cfg.write_text(json.dumps({"p_values": [1], "rhobeg_values": [0.5], "node_counts": [6],
                               "edge_probs": [0.5], "weighted": "false", "shots": 128}))
    out = tmp_path / "grid"
    assert main(["gridsearch", "--config", str(cfg), "--out-dir", str(out), "--seed", "1"]) == 0
    for name in ("gridsearch.csv", "summary.csv", "cell_scores.csv", "report.json"):
        assert (out / name).exists()
    assert main(["gridsearch", "--config", str(tmp_path / "nope.json"), "--out-dir", str(out)]) == 2

    cmp_dir = tmp_path / "cmp"
    assert main(["compare", "--sizes", "14", "--n-max", "6", "--p-edge", "0.3", "--p", "1",
                 "--iters", "10", "--shots", "128", "--out-dir", str(cmp_dir)]) == 0
    assert (cmp_dir / "compare.csv").read_text().startswith("nodes,policy,cut")
    assert (cmp_dir / "compare_plot.csv").exists()
