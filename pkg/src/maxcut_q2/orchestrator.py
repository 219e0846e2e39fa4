"""Coordinator/worker dispatch of sub-graph solves.

The coordinator turns sub-graphs into a :class:`TaskPlan` (one solver call per
task, each with its own derived seed), runs the plan on a thread pool and is
the only writer of the per-cluster result table. Because every random choice
comes from a task seed, results do not depend on the pool size.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor, FIRST_EXCEPTION, wait
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .errors import DispatchError, InputError, ParameterError
from .qaoa import QaoaConfig
from .seeding import derive_seed
from .solvers import SolveRecord, run_solver

POLICY_KINDS = ("all_qaoa", "all_gw", "best_of", "rule_based")
_QAOA_KEYS = ("p", "rhobeg", "max_iters", "shots", "expectation_mode")
_PREDICATE_KEYS = ("max_density", "min_density", "max_nodes", "min_nodes", "weighted")


@dataclass(frozen=True)
class Rule:
    """``solver`` applies when every given predicate holds.

    ``max_density`` is strict (density < value); the other bounds are
    inclusive. A rule with no predicates is the default branch.
    """

    solver: str
    max_density: Optional[float] = None
    min_density: Optional[float] = None
    max_nodes: Optional[int] = None
    min_nodes: Optional[int] = None
    weighted: Optional[bool] = None
    qaoa: dict = field(default_factory=dict, hash=False, compare=True)

    @property
    def is_default(self) -> bool:
        return all(getattr(self, k) is None for k in _PREDICATE_KEYS)

    def matches(self, graph) -> bool:
        density = graph.density
        if self.max_density is not None and not density < self.max_density:
            return False
        if self.min_density is not None and density < self.min_density:
            return False
        if self.max_nodes is not None and graph.num_nodes > self.max_nodes:
            return False
        if self.min_nodes is not None and graph.num_nodes < self.min_nodes:
            return False
        if self.weighted is not None and graph.is_weighted != self.weighted:
            return False
        return True

    @classmethod
    def from_dict(cls, d: dict) -> "Rule":
        d = dict(d)
        if "default" in d:
            return cls(solver=d.pop("default"), qaoa={k: d[k] for k in _QAOA_KEYS if k in d})
        unknown = set(d) - {"solver", *_PREDICATE_KEYS, *_QAOA_KEYS}
        if unknown:
            raise ParameterError(f"unknown rule keys {sorted(unknown)}")
        if "solver" not in d:
            raise ParameterError("rule needs a 'solver'")
        return cls(
            solver=d["solver"],
            qaoa={k: d[k] for k in _QAOA_KEYS if k in d},
            **{k: d[k] for k in _PREDICATE_KEYS if k in d},
        )


@dataclass(frozen=True)
class SolverPolicy:
    kind: str = "all_qaoa"
    rules: tuple = ()

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ParameterError(f"unknown policy kind {self.kind!r}; expected one of {POLICY_KINDS}")
        if self.kind == "rule_based":
            if not self.rules or not self.rules[-1].is_default:
                raise ParameterError("rule table must end with a default branch")
            for r in self.rules:
                if r.solver not in ("qaoa", "gw", "exact", "random"):
                    raise ParameterError(f"unknown solver {r.solver!r} in rule")

    @classmethod
    def from_dict(cls, d: dict) -> "SolverPolicy":
        kind = d.get("kind", "rule_based" if "rules" in d else None)
        rules = tuple(Rule.from_dict(r) for r in d.get("rules", ()))
        return cls(kind=kind, rules=rules)

    def choose(self, graph, base: QaoaConfig):
        """``(solver, qaoa_config)`` pairs this policy runs on ``graph``."""
        if self.kind == "all_qaoa":
            return [("qaoa", base)]
        if self.kind == "all_gw":
            return [("gw", base)]
        if self.kind == "best_of":
            return [("qaoa", base), ("gw", base)]
        for rule in self.rules:
            if rule.matches(graph):
                cfg = replace(base, **rule.qaoa) if rule.qaoa else base
                return [(rule.solver, cfg)]
        raise AssertionError("unreachable: rule table has a default")


# Deeper QAOA^2 levels and merge graphs: exact when small, GW otherwise.
CLASSICAL = SolverPolicy("rule_based", (Rule("exact", max_nodes=20), Rule("gw")))


def load_policy(spec) -> SolverPolicy:
    """A policy from a kind name, a dict, or a JSON file path."""
    if isinstance(spec, SolverPolicy):
        return spec
    if isinstance(spec, dict):
        return SolverPolicy.from_dict(spec)
    if spec in POLICY_KINDS and spec != "rule_based":
        return SolverPolicy(spec)
    try:
        with open(spec, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParameterError(f"policy {spec!r} is neither a kind nor a readable file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParameterError(f"policy file {spec!r}: {exc}") from None
    return SolverPolicy.from_dict(data)


@dataclass(frozen=True)
class Task:
    cluster: int
    subgraph: object
    solver: str
    config: QaoaConfig
    seed: int


@dataclass(frozen=True)
class TaskPlan:
    tasks: tuple
    num_clusters: int
    policy: SolverPolicy


def plan(subgraphs: Sequence, policy: SolverPolicy, base_seed: int,
         qaoa: Optional[QaoaConfig] = None) -> TaskPlan:
    if not subgraphs:
        raise InputError("no sub-graphs to plan")
    qaoa = qaoa or QaoaConfig()
    tasks = []
    for k, sub in enumerate(subgraphs):
        for solver, cfg in policy.choose(sub.graph, qaoa):
            tasks.append(Task(k, sub, solver, cfg, derive_seed(base_seed, k, solver)))
    return TaskPlan(tuple(tasks), len(subgraphs), policy)


def run_task(task: Task) -> SolveRecord:
    rec = run_solver(task.solver, task.subgraph.graph, task.config, task.seed)
    rec.cluster = task.cluster
    return rec


def default_workers(num_tasks: int) -> int:
    return max(1, min(os.cpu_count() or 1, num_tasks))


def run_parallel(fn, items: Sequence, workers: Optional[int] = None) -> list:
    """``[fn(x) for x in items]`` on a thread pool, in input order.

    The first failure cancels pending work and raises :class:`DispatchError`
    naming the failing item's index.
    """
    items = list(items)
    if workers is None:
        workers = default_workers(len(items))
    if workers < 1:
        raise ParameterError("worker pool size must be >= 1")
    if workers == 1 or len(items) <= 1:
        out = []
        for k, item in enumerate(items):
            try:
                out.append(fn(item))
            except Exception as exc:
                raise DispatchError(k, exc) from exc
        return out
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        futures = [pool.submit(fn, item) for item in items]
        wait(futures, return_when=FIRST_EXCEPTION)
        for k, fut in enumerate(futures):
            if fut.done() and not fut.cancelled() and fut.exception() is not None:
                for other in futures:
                    other.cancel()
                raise DispatchError(k, fut.exception()) from fut.exception()
        return [f.result() for f in futures]


def select_best(qaoa: SolveRecord, gw: SolveRecord) -> SolveRecord:
    """The record with the strictly larger cut; ties go to GW."""
    if qaoa.cluster != gw.cluster or len(qaoa.assignment) != len(gw.assignment):
        raise InputError("records refer to different sub-graphs")
    return qaoa if qaoa.cut > gw.cut else gw


def dispatch(task_plan: TaskPlan, workers: Optional[int] = None) -> list:
    """Run every task; return one record per cluster in cluster order."""
    try:
        results = run_parallel(run_task, task_plan.tasks, workers)
    except DispatchError as err:
        raise DispatchError(task_plan.tasks[err.cluster].cluster, err.cause) from err.cause
    by_cluster = [[] for _ in range(task_plan.num_clusters)]
    for rec in results:
        by_cluster[rec.cluster].append(rec)
    out = []
    for recs in by_cluster:
        if len(recs) == 1:
            out.append(recs[0])
        else:
            q = next(r for r in recs if r.solver == "qaoa")
            g = next(r for r in recs if r.solver == "gw")
            out.append(select_best(q, g))
    return out
