"""Clustering distance, the sum-of-p-th-powers objective and the trivially fair baseline."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

POINT_METRICS = {"euclidean": "euclidean", "manhattan": "cityblock"}


@dataclass(frozen=True)
class CostConfig:
    p: int = 2
    point_metric: str = "euclidean"

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 0:
            raise ValueError(f"p must be a non-negative integer, got {self.p}")
        if self.point_metric not in POINT_METRICS:
            raise ValueError(f"unknown point metric {self.point_metric!r}")


@dataclass
class Facility:
    location: np.ndarray
    origin: str = "centroid"  # "centroid" or "data_point"
    index: int | None = None  # data-point index when origin == "data_point"

    def __post_init__(self):
        self.location = np.asarray(self.location, dtype=float).reshape(-1)

    @classmethod
    def at_point(cls, ds, i: int) -> "Facility":
        return cls(ds.distance_vectors[i].copy(), "data_point", int(i))


def powered(d: np.ndarray, p: int) -> np.ndarray:
    # 0**0 == 1 so the p = 0 cost counts points
    return np.power(d, p) if p > 0 else np.ones_like(d)


def distances(points: np.ndarray, locations: np.ndarray, cfg: CostConfig) -> np.ndarray:
    points = np.atleast_2d(points)
    locations = np.atleast_2d(locations)
    if points.shape[1] != locations.shape[1]:
        raise ValueError(f"dimension mismatch: {points.shape[1]} vs {locations.shape[1]}")
    return cdist(points, locations, POINT_METRICS[cfg.point_metric])


def point_cost(v, f: Facility, cfg: CostConfig) -> float:
    d = distances(np.asarray(v, dtype=float).reshape(1, -1), f.location.reshape(1, -1), cfg)
    return float(powered(d, cfg.p)[0, 0])


def facility_locations(facilities) -> np.ndarray:
    if len(facilities) == 0:
        raise ValueError("empty facility list")
    locs = [f.location for f in facilities]
    if len({loc.size for loc in locs}) != 1:
        raise ValueError("facilities have inconsistent dimensions")
    return np.vstack(locs)


def cost_matrix(ds, facilities, cfg: CostConfig) -> np.ndarray:
    """n x |F| matrix of d(v, f)^p."""
    return powered(distances(ds.distance_vectors, facility_locations(facilities), cfg), cfg.p)


def assignment_cost(ds, assign, cfg: CostConfig) -> float:
    """Sum of d(v, phi(v))^p, recomputed from the assignment's facilities."""
    phi = np.asarray(assign.phi)
    if phi.shape != (ds.n,) or (phi < 0).any():
        raise ValueError("every point must be assigned")
    C = cost_matrix(ds, assign.facilities, cfg)
    return float(C[np.arange(ds.n), phi].sum())


def trivially_fair_cost(ds, candidates, cfg: CostConfig):
    """Best single center among ``candidates``: returns (facility, cost).

    Ties go to the lowest candidate index.
    """
    if len(candidates) == 0:
        raise ValueError("empty candidate list")
    totals = cost_matrix(ds, candidates, cfg).sum(axis=0)
    best = int(np.argmin(totals))
    return candidates[best], float(totals[best])


def data_point_facilities(ds) -> list[Facility]:
    return [Facility.at_point(ds, i) for i in range(ds.n)]
