"""Normalized cost, fairness and balance metrics, and the repeated-sampling experiment protocol."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .cost import CostConfig, assignment_cost, data_point_facilities, trivially_fair_cost
from .dataset import Dataset, sample
from .fair_assign import Assignment
from .pipeline import PipelineConfig, fair_demands, solve_ifc
from .similarity import SimilarityGraph, build_graph, fairness_satisfied
from .vanilla import ALGORITHMS, run_vanilla

METRIC_NAMES = ("normalized_cost", "fairness", "macro_fairness", "imbalance", "k_found")
CSV_COLUMNS = ("dataset", "algorithm", "k", "repetition") + METRIC_NAMES
METHODS = ("lp_fair",) + ALGORITHMS
DEFAULT_SAMPLE = 200


class DegenerateDataError(ValueError):
    """The trivially fair clustering costs zero, so normalization is undefined."""


@dataclass(frozen=True)
class Metrics:
    normalized_cost: float
    fairness: float
    macro_fairness: float
    imbalance: float
    k_found: int


def score(assign: Assignment, graph: SimilarityGraph, ds: Dataset, cfg: CostConfig,
          trivial_candidates) -> Metrics:
    _, base = trivially_fair_cost(ds, trivial_candidates, cfg)
    if base <= 0:
        raise DegenerateDataError("trivially fair clustering has zero cost")
    ok = fairness_satisfied(assign.phi, graph)
    clusters = np.unique(assign.phi)
    sizes = np.array([np.count_nonzero(assign.phi == c) for c in clusters])
    per_cluster = [100.0 * ok[assign.phi == c].mean() for c in clusters]
    return Metrics(assignment_cost(ds, assign, cfg) / base, 100.0 * ok.mean(),
                   float(np.mean(per_cluster)), float(np.std(sizes)), int(clusters.size))


def derived_seed(base_seed: int, i: int) -> int:
    return int(np.random.SeedSequence([base_seed, i]).generate_state(1)[0])


@dataclass
class ExperimentReport:
    dataset: str
    algorithm: str
    config: dict
    seeds: list[int]
    rows: list[Metrics] = field(default_factory=list)

    def values(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    def mean(self, name: str) -> float:
        return float(self.values(name).mean())

    def std(self, name: str) -> float:
        v = self.values(name)
        return float(v.std(ddof=1)) if v.size > 1 else 0.0

    def to_dict(self) -> dict:
        return {"dataset": self.dataset, "algorithm": self.algorithm, "config": self.config,
                "seeds": self.seeds, "rows": [asdict(r) for r in self.rows],
                "mean": {m: self.mean(m) for m in METRIC_NAMES},
                "std": {m: self.std(m) for m in METRIC_NAMES}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def csv_rows(self) -> list[list]:
        k = self.config["k"]
        return [[self.dataset, self.algorithm, k, i] + [getattr(r, m) for m in METRIC_NAMES]
                for i, r in enumerate(self.rows)]


def write_csv(reports, fh=None) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rep in reports:
        for row in rep.csv_rows():
            w.writerow([f"{v:.6f}" if isinstance(v, float) else v for v in row])
    text = out.getvalue()
    if fh is not None:
        fh.write(text)
    return text


def config_echo(cfg: PipelineConfig, dataset: str, method: str, sample_size) -> dict:
    return {"dataset": dataset, "algorithm": method, "k": cfg.k, "vanilla": cfg.vanilla_algorithm,
            "theta": cfg.similarity.theta, "gamma": cfg.similarity.gamma,
            "feature_metric": cfg.similarity.feature_metric, "delta": cfg.rounding.delta,
            "trials_override": cfg.rounding.trials_override, "p": cfg.cost.p,
            "point_metric": cfg.cost.point_metric, "ignore_fairness": cfg.ignore_fairness,
            "sample_size": sample_size}


def vanilla_assignment(ds, cfg: PipelineConfig, method: str, seed: int, graph=None) -> Assignment:
    """Score-ready assignment of a fairness-oblivious baseline."""
    res = run_vanilla(method, ds, cfg.k, cfg.cost, seed)
    if graph is None:
        graph = build_graph(ds, replace(cfg.similarity, k_nominal=cfg.k))
    a = Assignment(res.assignment, res.facilities, 0.0, fairness_satisfied(res.assignment, graph))
    a.cost = assignment_cost(ds, a, cfg.cost)
    return a


def run_once(ds: Dataset, cfg: PipelineConfig, method: str, seed: int, sample_size=None) -> Metrics:
    sub = ds if sample_size is None else sample(ds, min(sample_size, ds.n), seed)
    if method == "lp_fair":
        assign, vanilla = solve_ifc(sub, cfg, seed=seed)
        graph = fair_demands(sub, cfg, vanilla.k_found)
    elif method in ALGORITHMS:
        graph = build_graph(sub, replace(cfg.similarity, k_nominal=cfg.k))
        assign = vanilla_assignment(sub, cfg, method, seed, graph)
    else:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    return score(assign, graph, sub, cfg.cost, data_point_facilities(sub))


def _run_once_args(args):
    return run_once(*args)


def run_experiment(ds: Dataset, cfg: PipelineConfig, repetitions: int = 5, base_seed: int = 0,
                   sample_size=DEFAULT_SAMPLE, method: str = "lp_fair", dataset: str = "",
                   jobs: int = 1) -> ExperimentReport:
    """Repeat sample-and-solve ``repetitions`` times with seeds derived from ``base_seed``."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    seeds = [derived_seed(base_seed, i) for i in range(repetitions)]
    size = None if sample_size is None else min(sample_size, ds.n)
    work = [(ds, cfg, method, s, size) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_once_args, work))
    else:
        rows = [run_once(*w) for w in work]
    return ExperimentReport(dataset, method, config_echo(cfg, dataset, method, size), seeds, rows)


def sweep_k(ds: Dataset, cfg: PipelineConfig, k_range=(3, 10), per_k: int = 30,
            repetitions: int = 5, base_seed: int = 0, method: str = "lp_fair",
            dataset: str = "", jobs: int = 1) -> list[ExperimentReport]:
    """One report per k in the inclusive range, sampling ``per_k * k`` points (capped at n)."""
    lo, hi = k_range
    if not 1 <= lo <= hi <= ds.n:
        raise ValueError(f"k range {k_range} not within [1, {ds.n}]")
    return [run_experiment(ds, replace(cfg, k=k), repetitions, base_seed, min(per_k * k, ds.n),
                           method, dataset, jobs)
            for k in range(lo, hi + 1)]


def summary_table(reports) -> str:
    """Table-1-shaped CSV: one line per algorithm with mean and std columns."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    names = ("normalized_cost", "fairness", "macro_fairness", "imbalance")
    w.writerow(["dataset", "algorithm", "k", "repetitions"]
               + [f"{m}_{s}" for m in names for s in ("mean", "std")])
    for r in reports:
        w.writerow([r.dataset, r.algorithm, r.config["k"], len(r.rows)]
                   + [f"{f(m):.6f}" for m in names for f in (r.mean, r.std)])
    return out.getvalue()
