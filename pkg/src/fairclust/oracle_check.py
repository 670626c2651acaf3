"""Randomized cross-checks of the LP, the exact oracles and the hardness reduction."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import lp
from .cost import CostConfig, Facility, cost_matrix
from .dataset import Dataset
from .fair_assign import (Assignment, brute_force_from_costs, build_ifa_lp_from_costs,
                          remap_to_nearest)
from .similarity import SimilarityGraph, similar_pairs
from .testgen import (brute_force_satisfactory_partition, fair_clustering_below,
                      random_sp_instance, reduce_to_ifc, triangle_violation)

TOL = 1e-6


@dataclass
class SmallInstance:
    X: np.ndarray  # distance features
    F: np.ndarray  # fairness features
    gamma: float
    m: np.ndarray
    facilities: np.ndarray  # facility locations, one per row

    @property
    def ds(self) -> Dataset:
        return Dataset(self.X, self.F, np.arange(len(self.X)))

    def graph(self) -> SimilarityGraph:
        g = SimilarityGraph.from_adjacency(similar_pairs(self.F, self.gamma), gamma=self.gamma)
        return g.with_demands(np.minimum(self.m, g.degrees))

    def costs(self, cfg: CostConfig = CostConfig()) -> np.ndarray:
        return cost_matrix(self.ds, [Facility(f) for f in self.facilities], cfg)

    def drop(self, v: int) -> "SmallInstance":
        keep = np.arange(len(self.X)) != v
        return SmallInstance(self.X[keep], self.F[keep], self.gamma, self.m[keep], self.facilities)

    def to_dict(self) -> dict:
        return {"distance_features": self.X.tolist(), "fairness_features": self.F.tolist(),
                "gamma": self.gamma, "m": self.m.tolist(),
                "facilities": self.facilities.tolist()}


def random_instance(rng, max_n: int = 8, k: int = 2) -> SmallInstance:
    n = int(rng.integers(2, max_n + 1))
    X = rng.random((n, 2))
    F = rng.random((n, 2))
    gamma = float(rng.uniform(0.3, 0.95))
    deg = similar_pairs(F, gamma).sum(1)
    m = np.array([rng.integers(0, d + 1) for d in deg])
    return SmallInstance(X, F, gamma, m, rng.random((k, 2)))


def flip_fairness_rows(model: lp.LpModel) -> lp.LpModel:
    """Deliberately broken LP (">=" fairness rows turned into "<="), for testing the checker."""
    senses = ["<=" if s == ">=" else s for s in model.senses]
    return lp.LpModel(model.objective, model.A, senses, model.rhs)


def lp_problem(inst: SmallInstance, corrupt: bool = False):
    """Return a description of the first LP-vs-oracle disagreement, or None."""
    C = inst.costs()
    graph = inst.graph()
    model = build_ifa_lp_from_costs(C, graph)
    if corrupt:
        model = flip_fairness_rows(model)
    sol = lp.solve(model)
    exact = brute_force_from_costs(C, graph)
    if exact is None:
        return "no fair assignment although demands are clamped"
    if sol.status != "optimal":
        return f"LP {sol.status} but a fair assignment of cost {exact.cost} exists"
    scale = 1.0 + abs(exact.cost)
    if sol.objective_value > exact.cost + TOL * scale:
        return f"LP objective {sol.objective_value} exceeds exact cost {exact.cost}"
    integral = np.all(np.minimum(np.abs(sol.x), np.abs(sol.x - 1)) < 1e-9)
    if integral and abs(sol.objective_value - exact.cost) > TOL * scale:
        return f"integral LP objective {sol.objective_value} != exact cost {exact.cost}"
    bound, feasible = lp.dual_bound(model, sol)
    if not feasible or bound > sol.objective_value + TOL * scale:
        return f"weak duality fails: dual {bound} vs primal {sol.objective_value}"
    return None


def remap_problem(inst: SmallInstance, rng):
    C = inst.costs()
    graph = inst.graph()
    exact = brute_force_from_costs(C, graph)
    old = [Facility(f) for f in inst.facilities]
    phi = Assignment(exact.phi, old, exact.cost, exact.fairness_satisfied)
    new = [Facility(f) for f in rng.random((int(rng.integers(1, 4)), 2))]
    out = remap_to_nearest(phi, new, inst.ds, graph)
    if not np.array_equal(out.fairness_satisfied, phi.fairness_satisfied):
        return "remap changed the fairness vector"
    return None


def minimize(inst: SmallInstance, still_bad) -> SmallInstance:
    """Greedily delete points while the failure persists."""
    changed = True
    while changed and len(inst.X) > 1:
        changed = False
        for v in range(len(inst.X)):
            smaller = inst.drop(v)
            if still_bad(smaller):
                inst, changed = smaller, True
                break
    return inst


@dataclass
class CheckResult:
    checks: int
    failure: str | None = None
    dump: dict | None = None


def run_checks(trials: int, max_n: int = 8, seed: int = 0, corrupt_lp: bool = False) -> CheckResult:
    """Random LP-vs-exact, remap and reduction checks; stops at the first failure."""
    if max_n > 10:
        raise ValueError("size bound above 10 exceeds the brute-force guard used here")
    checks = 0
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        inst = random_instance(rng, max_n)
        msg = lp_problem(inst, corrupt_lp)
        checks += 1
        if msg:
            small = minimize(inst, lambda s: lp_problem(s, corrupt_lp) is not None)
            return CheckResult(checks, f"trial {t}: {msg}",
                               {"kind": "lp", "trial": t, **small.to_dict()})
        msg = remap_problem(inst, rng)
        checks += 1
        if msg:
            return CheckResult(checks, f"trial {t}: {msg}", {"kind": "remap", "trial": t,
                                                             **inst.to_dict()})
        sp = random_sp_instance(rng, int(rng.integers(2, max_n + 1)), float(rng.uniform(0.2, 0.9)))
        red = reduce_to_ifc(sp, p=int(rng.integers(1, 3)))
        checks += 1
        lhs = fair_clustering_below(red) is not None
        rhs = brute_force_satisfactory_partition(sp) is not None
        tri = triangle_violation(red)
        if lhs != rhs or tri > 1e-9:
            return CheckResult(checks, f"trial {t}: reduction mismatch (clustering {lhs}, "
                                       f"partition {rhs}, triangle slack {tri:.3g})",
                               {"kind": "reduction", "trial": t, **json.loads(red.to_json())})
    return CheckResult(checks)
