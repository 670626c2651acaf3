"""Fair clustering end to end: vanilla facilities, rescaled demands, LP-FAIR assignment."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .cost import CostConfig
from .fair_assign import Assignment, RoundingConfig, lp_fair
from .similarity import (SimilarityConfig, SimilarityGraph, build_graph, fairness_satisfied,
                         rescale_demands)
from .vanilla import ALGORITHMS, ClusteringResult, run_vanilla

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineConfig:
    k: int = 5
    vanilla_algorithm: str = "kmeans"
    cost: CostConfig = field(default_factory=CostConfig)
    similarity: SimilarityConfig = field(default_factory=SimilarityConfig)
    rounding: RoundingConfig = field(default_factory=RoundingConfig)
    ignore_fairness: bool = False  # run with m = 0 everywhere

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.vanilla_algorithm not in ALGORITHMS:
            raise ValueError(f"unknown vanilla algorithm {self.vanilla_algorithm!r}")


def drop_empty(assign: Assignment) -> Assignment:
    """Remove facilities nobody is assigned to and reindex phi."""
    used = np.unique(assign.phi)
    if used.size == len(assign.facilities):
        return assign
    return Assignment(np.searchsorted(used, assign.phi), [assign.facilities[i] for i in used],
                      assign.cost, assign.fairness_satisfied, assign.trial_index,
                      assign.lp_objective, assign.trial_costs)


def fair_demands(ds, cfg: PipelineConfig, k_found: int) -> SimilarityGraph:
    """Similarity graph with demands floor(theta / k * deg) rescaled by k / k_found."""
    sim = replace(cfg.similarity, k_nominal=cfg.k)
    graph = rescale_demands(build_graph(ds, sim), cfg.k, k_found)
    if graph.n_clamped:
        log.warning("m_v clamped to |Gamma(v)| for %d points", graph.n_clamped)
    return graph


def solve_ifc(ds, cfg: PipelineConfig, seed=None, graph: SimilarityGraph | None = None):
    """Run the vanilla stage, then fairly reassign points to its facilities.

    Returns ``(assignment, vanilla_result)``. ``seed`` overrides the rounding
    seed and also seeds the vanilla stage. The assignment's fairness flags are
    always measured against ``graph`` (or the rescaled demands), even when
    ``cfg.ignore_fairness`` drops the constraints from the LP.
    """
    if cfg.k > ds.n:
        raise ValueError(f"k = {cfg.k} exceeds n = {ds.n}")
    rounding = cfg.rounding if seed is None else RoundingConfig(
        cfg.rounding.delta, cfg.rounding.trials_override, seed)
    vanilla: ClusteringResult = run_vanilla(cfg.vanilla_algorithm, ds, cfg.k, cfg.cost, rounding.seed)
    if graph is None:
        graph = fair_demands(ds, cfg, vanilla.k_found)
    lp_graph = graph.with_demands(np.zeros(graph.n, dtype=int)) if cfg.ignore_fairness else graph
    assign = lp_fair(ds, lp_graph, vanilla.facilities, cfg.cost, rounding)
    if cfg.ignore_fairness:
        assign.fairness_satisfied = fairness_satisfied(assign.phi, graph)
    return drop_empty(assign), vanilla
