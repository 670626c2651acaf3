"""Individually fair assignment to fixed facilities: LP relaxation, randomized rounding, exact oracle."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import lp
from .cost import CostConfig, Facility, cost_matrix, distances, facility_locations
from .similarity import SimilarityGraph, fairness_satisfied

BRUTE_FORCE_LIMIT = 10 ** 7
NEG_TOL = 1e-9


class InfeasibleError(RuntimeError):
    """The fairness LP has no feasible point."""


class DemandError(ValueError):
    """Some m_v exceeds |Gamma(v)|."""


@dataclass
class Assignment:
    phi: np.ndarray
    facilities: list[Facility]
    cost: float
    fairness_satisfied: np.ndarray
    trial_index: int = 0
    lp_objective: float | None = field(default=None, compare=False)
    trial_costs: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        self.phi = np.asarray(self.phi, dtype=int)
        self.fairness_satisfied = np.asarray(self.fairness_satisfied, dtype=bool)

    def to_json(self) -> str:
        return json.dumps({"phi": self.phi.tolist(), "cost": self.cost,
                           "fairness": self.fairness_satisfied.tolist(),
                           "trial": self.trial_index})


@dataclass(frozen=True)
class RoundingConfig:
    delta: float = 0.1
    trials_override: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.trials_override is not None and self.trials_override < 1:
            raise ValueError("trials_override must be a positive integer")

    def trials(self, n: int) -> int:
        if self.trials_override is not None:
            return self.trials_override
        return max(1, math.ceil(math.log(n) / math.log1p(self.delta)))


def _check_demands(graph: SimilarityGraph):
    over = np.flatnonzero(graph.m > graph.degrees)
    if over.size:
        v = int(over[0])
        raise DemandError(f"point {v}: m_v = {graph.m[v]} exceeds |Gamma(v)| = {graph.degrees[v]}")


def build_ifa_lp_from_costs(C: np.ndarray, graph: SimilarityGraph) -> lp.LpModel:
    """Fairness LP over a precomputed n x K cost matrix; variable v * K + f is x_{v,f}."""
    C = np.atleast_2d(np.asarray(C, dtype=float))
    n, K = C.shape
    if K == 0:
        raise ValueError("empty facility list")
    if graph.n != n:
        raise ValueError("graph and cost matrix disagree on point count")
    _check_demands(graph)
    A = np.zeros((n * K + n, n * K))
    for v, nb in enumerate(graph.neighbors):
        for f in range(K):
            row = A[v * K + f]
            row[nb * K + f] = 1.0
            row[v * K + f] -= graph.m[v]
    for v in range(n):
        A[n * K + v, v * K:(v + 1) * K] = 1.0
    senses = [">="] * (n * K) + ["="] * n
    rhs = np.concatenate([np.zeros(n * K), np.ones(n)])
    return lp.LpModel(C.reshape(-1), A, senses, rhs)


def build_ifa_lp(ds, graph: SimilarityGraph, facilities, cfg: CostConfig = CostConfig()) -> lp.LpModel:
    if len(facilities) == 0:
        raise ValueError("empty facility list")
    return build_ifa_lp_from_costs(cost_matrix(ds, facilities, cfg), graph)


def clean_fractional(x: np.ndarray, n: int, K: int) -> np.ndarray:
    """Clamp round-off negatives to zero and renormalize each point's row."""
    X = np.asarray(x, dtype=float).reshape(n, K).copy()
    if X.min() < -1e-6:
        raise ValueError(f"LP solution has a clearly negative entry {X.min():.3g}")
    X[X < NEG_TOL] = 0.0
    return X / X.sum(axis=1, keepdims=True)


def uniform(seed: int, trial: int, v: int) -> float:
    """One U[0, 1) draw from the stream derived from (seed, trial, point)."""
    word = np.random.SeedSequence([seed, trial, v]).generate_state(1, np.uint64)[0]
    return float(word >> np.uint64(11)) * 2.0 ** -53


def round_once(X: np.ndarray, seed: int, trial: int) -> np.ndarray:
    """Independent inverse-CDF draw of a facility per point from the rows of ``X``."""
    cdf = np.cumsum(X, axis=1)
    u = np.array([uniform(seed, trial, v) for v in range(X.shape[0])])
    phi = (cdf <= u[:, None]).sum(axis=1)
    # a cdf that ends a hair below 1 must not spill onto trailing zero-mass facilities
    last = X.shape[1] - 1 - np.argmax(X[:, ::-1] > 0, axis=1)
    return np.minimum(phi, last)


def round_trials(X: np.ndarray, C: np.ndarray, trials: int, seed: int):
    """Round ``trials`` times; returns (phis, costs) with one row per trial."""
    phis = np.array([round_once(X, seed, t) for t in range(trials)])
    costs = C[np.arange(X.shape[0]), phis].sum(axis=1)
    return phis, costs


def lp_fair_from_costs(C: np.ndarray, graph: SimilarityGraph, facilities,
                       round_cfg: RoundingConfig = RoundingConfig()) -> Assignment:
    C = np.atleast_2d(np.asarray(C, dtype=float))
    n, K = C.shape
    model = build_ifa_lp_from_costs(C, graph)
    sol = lp.solve(model)
    if sol.status != "optimal":
        raise InfeasibleError(f"fairness LP is {sol.status}")
    X = clean_fractional(sol.x, n, K)
    phis, costs = round_trials(X, C, round_cfg.trials(n), round_cfg.seed)
    best = int(np.argmin(costs))
    phi = phis[best]
    return Assignment(phi, list(facilities), float(costs[best]), fairness_satisfied(phi, graph),
                      best, lp_objective=sol.objective_value, trial_costs=costs)


def lp_fair(ds, graph: SimilarityGraph, facilities, cost_cfg: CostConfig = CostConfig(),
            round_cfg: RoundingConfig = RoundingConfig()) -> Assignment:
    """Solve the fairness LP once, round it T times, keep the cheapest trial."""
    if len(facilities) == 0:
        raise ValueError("empty facility list")
    return lp_fair_from_costs(cost_matrix(ds, facilities, cost_cfg), graph, facilities, round_cfg)


def _enumerate(n: int, K: int, start: int, stop: int) -> np.ndarray:
    # row i is the base-K expansion of start + i, point 0 most significant
    codes = np.arange(start, stop, dtype=np.int64)
    powers = K ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (codes[:, None] // powers[None, :]) % K


def brute_force_from_costs(C: np.ndarray, graph: SimilarityGraph, facilities=None,
                           chunk: int = 1 << 16):
    """Exact min-cost fair assignment by enumeration, or None if none is fair.

    Ties are broken towards the lexicographically smallest phi.
    """
    C = np.atleast_2d(np.asarray(C, dtype=float))
    n, K = C.shape
    if K == 0:
        raise ValueError("empty facility list")
    total = K ** n
    if total > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{K}^{n} assignments exceed the brute-force limit {BRUTE_FORCE_LIMIT}")
    best_cost, best_phi = np.inf, None
    rows = np.arange(n)
    for start in range(0, total, chunk):
        phis = _enumerate(n, K, start, min(total, start + chunk))
        ok = np.ones(len(phis), dtype=bool)
        for v, nb in enumerate(graph.neighbors):
            if graph.m[v] > 0:
                ok &= (phis[:, nb] == phis[:, [v]]).sum(axis=1) >= graph.m[v]
        if not ok.any():
            continue
        costs = C[rows, phis[ok]].sum(axis=1)
        i = int(np.argmin(costs))
        if costs[i] < best_cost:
            best_cost, best_phi = float(costs[i]), phis[ok][i]
    if best_phi is None:
        return None
    return Assignment(best_phi, list(facilities or []), best_cost,
                      fairness_satisfied(best_phi, graph), 0)


def brute_force_ifa(ds, graph: SimilarityGraph, facilities, cfg: CostConfig = CostConfig()):
    if len(facilities) == 0:
        raise ValueError("empty facility list")
    return brute_force_from_costs(cost_matrix(ds, facilities, cfg), graph, facilities)


def nearest_facility_map(old_facilities, new_facilities, cfg: CostConfig = CostConfig()) -> np.ndarray:
    """nrst(f) for each old facility f; ties go to the lowest new index."""
    d = distances(facility_locations(old_facilities), facility_locations(new_facilities), cfg)
    return np.argmin(d, axis=1)


def remap_to_nearest(phi_star: Assignment, new_facilities, ds, graph: SimilarityGraph,
                     cfg: CostConfig = CostConfig()) -> Assignment:
    """Send every point to the new facility nearest its old one.

    Points that shared a facility still share one, so no point loses
    gamma-similar cluster mates.
    """
    if len(new_facilities) == 0 or len(phi_star.facilities) == 0:
        raise ValueError("empty facility list")
    phi = nearest_facility_map(phi_star.facilities, new_facilities, cfg)[phi_star.phi]
    C = cost_matrix(ds, new_facilities, cfg)
    cost = float(C[np.arange(ds.n), phi].sum())
    return Assignment(phi, list(new_facilities), cost, fairness_satisfied(phi, graph),
                      phi_star.trial_index)
