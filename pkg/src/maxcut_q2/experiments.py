"""Experiment drivers: QAOA-vs-GW grid search and the QAOA^2 size sweep."""
from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from .errors import MaxCutError, ParameterError, SizeError
from .graph import brute_force_maxcut, erdos_renyi
from .gw import gw_solve
from .merge import qaoa_squared
from .orchestrator import SolverPolicy, run_parallel
from .qaoa import SIMULATOR_CAP, QaoaConfig, iteration_schedule, optimize
from .seeding import derive_seed
from .solvers import random_baseline

GRID_HEADER = ["nodes", "p_edge", "weighted", "p", "rhobeg", "qaoa_cut", "gw_avg_cut",
               "gw_best_cut", "opt_cut_or_blank", "strict_win", "band_95_100"]
COMPARE_HEADER = ["nodes", "policy", "cut", "ratio_vs_all_qaoa", "elapsed_s"]
COMPARE_POLICIES = ("all_qaoa", "all_gw", "best_of", "gw_full", "random")
BAND_LOW = 0.95


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return repr(x)
    return str(x)


# ---------------------------------------------------------------- grid search

@dataclass(frozen=True)
class GridSpec:
    p_values: tuple = (3, 4, 5, 6, 7, 8)
    rhobeg_values: tuple = (0.1, 0.2, 0.3, 0.4, 0.5)
    node_counts: tuple = (8, 10, 12, 14, 16)
    edge_probs: tuple = (0.1, 0.2, 0.3, 0.4, 0.5)
    weighted: str = "both"
    shots: int = 4096
    expectation_mode: str = "sampled"
    gw_rounds: int = 30
    exact_cap: int = 20

    def __post_init__(self):
        if not self.p_values or not self.rhobeg_values:
            raise ParameterError("grid axes must be non-empty")
        if self.weighted not in ("both", "true", "false"):
            raise ParameterError("weighted must be 'both', 'true' or 'false'")
        for n in self.node_counts:
            if n > SIMULATOR_CAP:
                raise SizeError(f"{n} nodes exceeds simulator cap {SIMULATOR_CAP}")

    @property
    def cells(self):
        return [(p, r) for p in self.p_values for r in self.rhobeg_values]

    @property
    def weightings(self):
        return {"both": (False, True), "true": (True,), "false": (False,)}[self.weighted]

    @classmethod
    def from_dict(cls, d: dict) -> "GridSpec":
        d = dict(d)
        d.pop("seed", None)
        d.pop("workers", None)
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ParameterError(f"unknown grid config keys {sorted(unknown)}")
        for key in ("p_values", "rhobeg_values", "node_counts", "edge_probs"):
            if key in d:
                d[key] = tuple(d[key])
        if isinstance(d.get("weighted"), bool):
            d["weighted"] = "true" if d["weighted"] else "false"
        return cls(**d)


@dataclass
class GridRow:
    nodes: int
    p_edge: float
    weighted: bool
    p: int
    rhobeg: float
    qaoa_cut: float
    gw_avg_cut: float
    gw_best_cut: float
    opt_cut: Optional[float]
    strict_win: bool
    band_95_100: bool


@dataclass
class ClassSummary:
    nodes: int
    p_edge: float
    weighted: bool
    proportion_strictly_better: float
    proportion_95_100: float
    raw_counts: dict
    normalized_cell_scores: dict
    winner_cell: Optional[tuple]


def _normalize(counts: dict) -> dict:
    total = sum(counts.values())
    return {k: (v / total if total else 0.0) for k, v in counts.items()}


def _winner(counts: dict, cells) -> Optional[tuple]:
    best = max(counts.values(), default=0)
    if best == 0:
        return None
    return next(c for c in cells if counts[c] == best)


@dataclass
class GridReport:
    spec: GridSpec
    rows: list = field(default_factory=list)

    def classes(self) -> list:
        """Per (nodes, p_edge, weighted) instance: proportions over the grid cells."""
        groups = {}
        for r in self.rows:
            groups.setdefault((r.nodes, r.p_edge, r.weighted), []).append(r)
        out = []
        for (n, pe, w), rows in groups.items():
            counts = {cell: 0 for cell in self.spec.cells}
            for r in rows:
                counts[(r.p, r.rhobeg)] += int(r.strict_win)
            out.append(ClassSummary(
                nodes=n, p_edge=pe, weighted=w,
                proportion_strictly_better=sum(r.strict_win for r in rows) / len(rows),
                proportion_95_100=sum(r.band_95_100 for r in rows) / len(rows),
                raw_counts=counts,
                normalized_cell_scores=_normalize(counts),
                winner_cell=_winner(counts, self.spec.cells),
            ))
        return out

    def cell_scores(self, weighted: bool):
        """Strict wins per cell summed over all instances of one weighting."""
        counts = {cell: 0 for cell in self.spec.cells}
        for r in self.rows:
            if r.weighted == weighted:
                counts[(r.p, r.rhobeg)] += int(r.strict_win)
        return counts, _normalize(counts), _winner(counts, self.spec.cells)


def _instance_seed(seed, n, pe, w):
    return derive_seed(seed, "grid-instance", n, float(pe), bool(w))


def grid_search(spec: GridSpec, seed: int = 0, workers: Optional[int] = None) -> GridReport:
    """Run QAOA at every (p, rhobeg) cell and GW once on every graph instance.

    One unweighted and/or one weighted G(n, p_edge) instance per node count
    and edge probability. A cell is a strict win when the QAOA cut exceeds the
    GW rounding average, and lands in the band when it reaches [95, 100)% of it.
    """
    instances = []
    for n in spec.node_counts:
        for pe in spec.edge_probs:
            for w in spec.weightings:
                s = _instance_seed(seed, n, pe, w)
                instances.append((n, pe, w, s, erdos_renyi(n, pe, w, seed=s)))

    jobs = []
    for n, pe, w, s, g in instances:
        jobs.append(("gw", g, s))
        if n <= spec.exact_cap:
            jobs.append(("exact", g, s))
        for p, rb in spec.cells:
            cfg = QaoaConfig(p=p, rhobeg=rb, max_iters=iteration_schedule(p), shots=spec.shots,
                             seed=derive_seed(s, "qaoa", p, float(rb)),
                             expectation_mode=spec.expectation_mode)
            jobs.append(("qaoa", g, cfg))

    def run(job):
        kind, g, arg = job
        if kind == "gw":
            return gw_solve(g, rounds=spec.gw_rounds, seed=arg)
        if kind == "exact":
            return brute_force_maxcut(g)[1]
        return optimize(g, arg).cut

    results = iter(run_parallel(run, jobs, workers))
    report = GridReport(spec)
    for n, pe, w, s, g in instances:
        gw = next(results)
        opt = next(results) if n <= spec.exact_cap else None
        for p, rb in spec.cells:
            q = next(results)
            report.rows.append(GridRow(
                nodes=n, p_edge=pe, weighted=w, p=p, rhobeg=rb,
                qaoa_cut=q, gw_avg_cut=gw.average_cut, gw_best_cut=gw.best_cut, opt_cut=opt,
                strict_win=q > gw.average_cut,
                band_95_100=BAND_LOW * gw.average_cut <= q < gw.average_cut,
            ))
    return report


def emit_grid_csv(report: GridReport) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(GRID_HEADER)
    for r in report.rows:
        wr.writerow([_fmt(x) for x in (r.nodes, r.p_edge, r.weighted, r.p, r.rhobeg, r.qaoa_cut,
                                        r.gw_avg_cut, r.gw_best_cut, r.opt_cut, r.strict_win,
                                        r.band_95_100)])
    return buf.getvalue()


def parse_grid_csv(text: str) -> list:
    rd = csv.reader(io.StringIO(text))
    header = next(rd)
    if header != GRID_HEADER:
        raise ParameterError(f"unexpected grid CSV header {header}")
    rows = []
    for f in rd:
        rows.append(GridRow(
            nodes=int(f[0]), p_edge=float(f[1]), weighted=f[2] == "1", p=int(f[3]),
            rhobeg=float(f[4]), qaoa_cut=float(f[5]), gw_avg_cut=float(f[6]),
            gw_best_cut=float(f[7]), opt_cut=float(f[8]) if f[8] else None,
            strict_win=f[9] == "1", band_95_100=f[10] == "1",
        ))
    return rows


def emit_grid_summary_csv(report: GridReport) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["nodes", "p_edge", "weighted", "proportion_strictly_better", "proportion_95_100",
                 "wins", "winner_p", "winner_rhobeg"])
    for c in report.classes():
        wp, wrb = c.winner_cell if c.winner_cell else (None, None)
        wr.writerow([_fmt(x) for x in (c.nodes, c.p_edge, c.weighted, c.proportion_strictly_better,
                                        c.proportion_95_100, sum(c.raw_counts.values()), wp, wrb)])
    return buf.getvalue()


def emit_grid_plot_data(report: GridReport) -> str:
    """Cell-score table: one row per (p, rhobeg), wins and scores per weighting."""
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["p", "rhobeg", "unweighted_wins", "unweighted_score", "weighted_wins", "weighted_score"])
    cu, su, _ = report.cell_scores(False)
    cw, sw, _ = report.cell_scores(True)
    for cell in report.spec.cells:
        wr.writerow([_fmt(x) for x in (cell[0], cell[1], cu[cell], su[cell], cw[cell], sw[cell])])
    return buf.getvalue()


def grid_report_json(report: GridReport) -> dict:
    def cell_key(c):
        return f"p={c[0]},rhobeg={c[1]}"

    classes = []
    for c in report.classes():
        d = asdict(c)
        d["raw_counts"] = {cell_key(k): v for k, v in c.raw_counts.items()}
        d["normalized_cell_scores"] = {cell_key(k): v for k, v in c.normalized_cell_scores.items()}
        classes.append(d)
    by_weighting = {}
    for w in report.spec.weightings:
        counts, scores, winner = report.cell_scores(w)
        by_weighting["weighted" if w else "unweighted"] = {
            "raw_counts": {cell_key(k): v for k, v in counts.items()},
            "normalized_cell_scores": {cell_key(k): v for k, v in scores.items()},
            "winner_cell": winner,
        }
    return {"spec": asdict(report.spec), "classes": classes, "by_weighting": by_weighting}


# ------------------------------------------------------------- size sweep

@dataclass
class CompareRow:
    nodes: int
    policy: str
    cut: Optional[float]
    ratio: Optional[float]
    elapsed: float


def compare_experiment(node_counts: Sequence[int], edge_prob: float = 0.1, n_max: int = 12,
                       seed: int = 0, cfg: Optional[QaoaConfig] = None,
                       workers: Optional[int] = None, uniform_baseline: bool = False) -> list:
    """QAOA^2 under each policy vs GW on the whole graph and a random baseline.

    Ratios are relative to the all-QAOA cut of the same graph. A GW failure
    on the full graph leaves that row's cut empty instead of aborting.
    """
    cfg = cfg or QaoaConfig(p=6, rhobeg=0.5)
    rows = []
    for n in node_counts:
        if n < n_max:
            raise ParameterError(f"node count {n} below n_max {n_max}")
        gseed = derive_seed(seed, "compare", n, float(edge_prob))
        g = erdos_renyi(n, edge_prob, False, seed=gseed)
        results = {}
        for kind in ("all_qaoa", "all_gw", "best_of"):
            rec = qaoa_squared(g, n_max, SolverPolicy(kind), cfg, seed=gseed, workers=workers)
            results[kind] = (rec.cut, rec.elapsed)
        try:
            gw = gw_solve(g, seed=gseed)
            results["gw_full"] = (gw.best_cut, gw.elapsed)
        except (MaxCutError, MemoryError):
            results["gw_full"] = (None, 0.0)
        rb = random_baseline(g, seed=gseed, uniform=uniform_baseline)
        results["random"] = (rb.cut, rb.elapsed)
        ref = results["all_qaoa"][0]
        for kind in COMPARE_POLICIES:
            cut, elapsed = results[kind]
            ratio = cut / ref if cut is not None and ref else None
            rows.append(CompareRow(n, kind, cut, ratio, elapsed))
    return rows


def emit_compare_csv(rows: Sequence[CompareRow]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(COMPARE_HEADER)
    for r in rows:
        wr.writerow([_fmt(r.nodes), r.policy, _fmt(r.cut), _fmt(r.ratio), _fmt(r.elapsed)])
    return buf.getvalue()


def emit_compare_plot_data(rows: Sequence[CompareRow]) -> str:
    """Wide table: ``nodes`` then one ratio column per policy."""
    table = {}
    for r in rows:
        table.setdefault(r.nodes, {})[r.policy] = r.ratio
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["nodes", *COMPARE_POLICIES])
    for n, vals in table.items():
        wr.writerow([_fmt(n), *(_fmt(vals.get(k)) for k in COMPARE_POLICIES)])
    return buf.getvalue()

