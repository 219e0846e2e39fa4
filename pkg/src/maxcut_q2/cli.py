"""QAOA-in-QAOA MaxCut command-line driver.

Exit codes: 0 success, 2 parameter error, 3 size/cap error, 4 solver numeric
error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from . import kernels
from .errors import MaxCutError, ParameterError
from .experiments import (
    GridSpec,
    compare_experiment,
    emit_compare_csv,
    emit_compare_plot_data,
    emit_grid_csv,
    emit_grid_plot_data,
    emit_grid_summary_csv,
    grid_report_json,
    grid_search,
)
from .graph import erdos_renyi, read_graph, serialize_graph, spins_to_bitstring, write_graph
from .merge import qaoa_squared
from .orchestrator import load_policy
from .partition import Partition
from .qaoa import DEFAULT_SHOTS, QaoaConfig
from .solvers import random_baseline, run_solver

log = logging.getLogger("maxcut_q2")

TRACE_HEADER = ["level", "num_clusters", "cluster_sizes", "solver_per_cluster", "intra_cuts",
                "base_inter_cut", "merge_cut", "global_cut"]


def _qaoa_config(args) -> QaoaConfig:
    return QaoaConfig(
        p=args.p,
        rhobeg=args.rhobeg,
        max_iters=args.iters,
        shots=args.shots,
        seed=args.seed,
        expectation_mode="exact" if args.exact_expectation else "sampled",
    )


def _add_qaoa_options(sp):
    sp.add_argument("--p", type=int, default=6, help="QAOA layers")
    sp.add_argument("--rhobeg", type=float, default=0.5, help="initial COBYLA step")
    sp.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    sp.add_argument("--iters", type=int, default=None,
                    help="objective evaluations (default: 30 + 14 (p - 3), at least 30)")
    sp.add_argument("--exact-expectation", action="store_true",
                    help="optimize the exact expectation instead of the shot estimate")


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_gen(args):
    g = erdos_renyi(args.nodes, args.p_edge, args.weighted, seed=args.seed)
    if args.out:
        write_graph(g, args.out)
    else:
        sys.stdout.write(serialize_graph(g))
    log.info("generated %d nodes, %d edges", g.num_nodes, g.num_edges)


def cmd_solve(args):
    g = read_graph(args.graph)
    if args.solver == "random":
        rec = random_baseline(g, seed=args.seed, uniform=args.uniform)
    else:
        rec = run_solver(args.solver, g, _qaoa_config(args), args.seed)
    print(json.dumps(rec.to_record(), indent=2, default=float))


def trace_csv(trace) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(TRACE_HEADER)
    for t in trace:
        wr.writerow([
            t["level"], t["num_clusters"],
            ";".join(map(str, t["cluster_sizes"])),
            ";".join(t["solver_per_cluster"]),
            ";".join(repr(float(c)) for c in t["intra_cuts"]),
            repr(float(t["base_inter_cut"])), repr(float(t["merge_cut"])),
            repr(float(t["global_cut"])),
        ])
    return buf.getvalue()


def cmd_qaoa2(args):
    g = read_graph(args.graph)
    policy = load_policy(args.policy)
    rec = qaoa_squared(g, args.n_max, policy, _qaoa_config(args), seed=args.seed,
                       workers=args.workers)
    _write(args.out, trace_csv(rec.metadata["trace"]))
    if args.dump_partition and "partition" in rec.metadata:
        p = Partition.from_clusters(rec.metadata["partition"], g.num_nodes)
        _write(args.dump_partition, p.serialize())
    summary = {"cut": rec.cut, "bitstring": spins_to_bitstring(rec.assignment),
               "policy": policy.kind, "n_max": args.n_max, "seed": args.seed,
               "elapsed_s": rec.elapsed, "trace": rec.metadata["trace"]}
    if args.json:
        _write(args.json, json.dumps(summary, indent=2, default=float) + "\n")
    print(f"cut={rec.cut!r} elapsed={rec.elapsed:.3f}s", file=sys.stderr)


def cmd_gridsearch(args):
    cfg = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ParameterError(f"grid config {args.config!r}: {exc}") from None
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    workers = args.workers if args.workers is not None else cfg.get("workers")
    spec = GridSpec.from_dict(cfg)
    report = grid_search(spec, seed=seed, workers=workers)
    os.makedirs(args.out_dir, exist_ok=True)
    _write(os.path.join(args.out_dir, "gridsearch.csv"), emit_grid_csv(report))
    _write(os.path.join(args.out_dir, "summary.csv"), emit_grid_summary_csv(report))
    _write(os.path.join(args.out_dir, "cell_scores.csv"), emit_grid_plot_data(report))
    _write(os.path.join(args.out_dir, "report.json"),
           json.dumps({"seed": seed, **grid_report_json(report)}, indent=2) + "\n")
    print(f"{len(report.rows)} rows written to {args.out_dir}", file=sys.stderr)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_compare(args):
    rows = compare_experiment(args.sizes, args.p_edge, args.n_max, seed=args.seed,
                              cfg=_qaoa_config(args), workers=args.workers,
                              uniform_baseline=args.uniform)
    os.makedirs(args.out_dir, exist_ok=True)
    _write(os.path.join(args.out_dir, "compare.csv"), emit_compare_csv(rows))
    _write(os.path.join(args.out_dir, "compare_plot.csv"), emit_compare_plot_data(rows))
    print(f"{len(rows)} rows written to {args.out_dir}", file=sys.stderr)


def build_parser():
    ap = argparse.ArgumentParser(prog="maxcut-q2", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", help="write an Erdos-Renyi graph")
    sp.add_argument("--nodes", type=int, required=True)
    sp.add_argument("--p-edge", type=float, required=True)
    sp.add_argument("--weighted", action="store_true", help="weights uniform in [0, 1]")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("solve", help="solve a graph with one solver")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--solver", choices=["qaoa", "gw", "random", "exact"], required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--uniform", action="store_true", help="random: skip the local search")
    _add_qaoa_options(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("qaoa2", help="divide-and-conquer solve; writes the level trace CSV")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--n-max", type=int, required=True, help="qubit cap per sub-graph")
    sp.add_argument("--policy", default="all_qaoa",
                    help="all_qaoa, all_gw, best_of, or a JSON policy file")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--out", help="trace CSV path (default stdout)")
    sp.add_argument("--json", help="write the full result as JSON")
    sp.add_argument("--dump-partition", help="write first-level clusters, one per line")
    _add_qaoa_options(sp)
    sp.set_defaults(func=cmd_qaoa2)

    sp = sub.add_parser("gridsearch", help="QAOA (p, rhobeg) grid vs GW")
    sp.add_argument("--config", help="JSON grid config; defaults are used when omitted")
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--workers", type=int, default=None)
    sp.set_defaults(func=cmd_gridsearch)

    sp = sub.add_parser("compare", help="QAOA^2 policies vs full-graph GW and a random baseline")
    sp.add_argument("--sizes", type=_int_list, default=[60, 120, 240])
    sp.add_argument("--p-edge", type=float, default=0.1)
    sp.add_argument("--n-max", type=int, default=12)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--uniform", action="store_true", help="bare uniform random baseline")
    _add_qaoa_options(sp)
    sp.set_defaults(func=cmd_compare)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    log.info("kernel backend: %s", kernels.BACKEND)
    try:
        args.func(args)
    except MaxCutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ParameterError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
