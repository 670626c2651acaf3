"""Fairness-oblivious clustering: k-means (k-means++ / Lloyd), Gonzalez and Hochbaum-Shmoys."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cost import CostConfig, Facility, distances, facility_locations, powered

ALGORITHMS = ("kmeans", "gonzalez", "hochbaum_shmoys")


@dataclass
class ClusteringResult:
    facilities: list[Facility]
    assignment: np.ndarray
    k_found: int

    def __post_init__(self):
        self.assignment = np.asarray(self.assignment, dtype=int)

    def radius(self, ds, cfg: CostConfig = CostConfig()) -> float:
        """Largest point-to-assigned-facility distance."""
        d = distances(ds.distance_vectors, facility_locations(self.facilities), cfg)
        return float(d[np.arange(ds.n), self.assignment].max())

    def cost(self, ds, cfg: CostConfig = CostConfig()) -> float:
        d = distances(ds.distance_vectors, facility_locations(self.facilities), cfg)
        return float(powered(d[np.arange(ds.n), self.assignment], cfg.p).sum())


def _check_k(ds, k):
    if k < 1 or k > ds.n:
        raise ValueError(f"k must lie in [1, n={ds.n}], got {k}")


def nearest(points, locations, cfg: CostConfig = CostConfig()) -> np.ndarray:
    # argmin returns the first minimum, i.e. ties go to the lowest facility index
    return np.argmin(distances(points, locations, cfg), axis=1)


def _finish(ds, facilities, cfg) -> ClusteringResult:
    phi = nearest(ds.distance_vectors, facility_locations(facilities), cfg)
    used = np.unique(phi)
    if used.size < len(facilities):
        facilities = [facilities[i] for i in used]
        phi = np.searchsorted(used, phi)
    return ClusteringResult(facilities, phi, len(facilities))


def kmeans_pp_seeds(X: np.ndarray, k: int, rng) -> list[int]:
    n = X.shape[0]
    seeds = [int(rng.integers(n))]
    d2 = ((X - X[seeds[0]]) ** 2).sum(1)
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            i = int(rng.choice(n, p=d2 / total))
        else:
            # every point coincides with a seed; fall back to a uniform unused index
            rest = np.setdiff1d(np.arange(n), seeds)
            i = int(rng.choice(rest))
        seeds.append(i)
        d2 = np.minimum(d2, ((X - X[i]) ** 2).sum(1))
    return seeds


def kmeans(ds, k: int, cfg: CostConfig = CostConfig(), seed=0, max_iters: int = 100) -> ClusteringResult:
    """k-means++ seeding followed by Lloyd iterations.

    Clusters that go empty are dropped, so ``k_found`` may be below ``k``.
    """
    _check_k(ds, k)
    if max_iters < 1:
        raise ValueError("max_iters must be positive")
    X = ds.distance_vectors
    rng = np.random.default_rng(seed)
    centers = X[kmeans_pp_seeds(X, k, rng)].copy()
    phi = nearest(X, centers, cfg)
    for _ in range(max_iters):
        used = np.unique(phi)
        centers = np.vstack([X[phi == c].mean(0) for c in used])
        new = nearest(X, centers, cfg)
        if np.array_equal(new, np.searchsorted(used, phi)):
            break
        phi = new
    return _finish(ds, [Facility(c, "centroid") for c in centers], cfg)


def gonzalez(ds, k: int, seed=0, cfg: CostConfig = CostConfig()) -> ClusteringResult:
    """Farthest-first traversal from a seeded random start."""
    _check_k(ds, k)
    X = ds.distance_vectors
    rng = np.random.default_rng(seed)
    centers = [int(rng.integers(ds.n))]
    dmin = distances(X, X[centers[0]], cfg)[:, 0]
    for _ in range(1, k):
        i = int(np.argmax(dmin))
        centers.append(i)
        dmin = np.minimum(dmin, distances(X, X[i], cfg)[:, 0])
    return _finish(ds, [Facility.at_point(ds, i) for i in centers], cfg)


def _greedy_centers(far: np.ndarray, limit: int) -> list[int]:
    """Index-order maximal set of points pairwise marked ``far``; stops past ``limit``."""
    alive = np.ones(far.shape[0], dtype=bool)
    picked = []
    while alive.any() and len(picked) <= limit:
        i = int(np.argmax(alive))
        picked.append(i)
        alive &= far[i]
    return picked


def hochbaum_shmoys(ds, k: int, cfg: CostConfig = CostConfig()) -> ClusteringResult:
    """Bottleneck k-center 2-approximation.

    Scans candidate radii r (the sorted distinct pairwise distances) and
    keeps the first r whose greedy set of points pairwise more than 2r apart
    has at most k members.
    """
    _check_k(ds, k)
    D = distances(ds.distance_vectors, ds.distance_vectors, cfg)
    for r in np.unique(D):
        picked = _greedy_centers(D > 2 * r, k)
        if len(picked) <= k:
            break
    return _finish(ds, [Facility.at_point(ds, i) for i in picked], cfg)


def run_vanilla(name: str, ds, k: int, cfg: CostConfig = CostConfig(), seed=0) -> ClusteringResult:
    if name == "kmeans":
        return kmeans(ds, k, cfg, seed)
    if name == "gonzalez":
        return gonzalez(ds, k, seed, cfg)
    if name == "hochbaum_shmoys":
        return hochbaum_shmoys(ds, k, cfg)
    raise ValueError(f"unknown vanilla algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
