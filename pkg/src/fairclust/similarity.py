"""Feature-space similarity, gamma-neighbour sets and per-point fairness demands."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial.distance import cdist

METRICS = ("euclidean", "manhattan", "hamming")


@dataclass(frozen=True)
class SimilarityConfig:
    gamma: float = 0.5
    feature_metric: str = "euclidean"
    theta: float = 0.5
    k_nominal: int = 5

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if not 0.0 < self.theta <= 1.0:
            raise ValueError(f"theta must lie in (0, 1], got {self.theta}")
        if self.feature_metric not in METRICS:
            raise ValueError(f"unknown feature metric {self.feature_metric!r}")
        if self.k_nominal < 1:
            raise ValueError("k_nominal must be positive")


@dataclass
class SimilarityGraph:
    neighbors: list[np.ndarray]
    m: np.ndarray
    gamma: float = float("nan")
    n_clamped: int = field(default=0, compare=False)

    def __post_init__(self):
        self.neighbors = [np.asarray(nb, dtype=int) for nb in self.neighbors]
        self.m = np.asarray(self.m, dtype=int)
        if self.m.shape != (len(self.neighbors),):
            raise ValueError("one demand per point required")

    @property
    def n(self) -> int:
        return len(self.neighbors)

    @property
    def degrees(self) -> np.ndarray:
        return np.array([nb.size for nb in self.neighbors], dtype=int)

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=bool)
        for v, nb in enumerate(self.neighbors):
            adj[v, nb] = True
        return adj

    def with_demands(self, m) -> "SimilarityGraph":
        return replace(self, m=np.asarray(m, dtype=int), n_clamped=0)

    def to_json(self) -> str:
        return json.dumps({"gamma": self.gamma,
                           "neighbors": [nb.tolist() for nb in self.neighbors],
                           "m": self.m.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "SimilarityGraph":
        d = json.loads(text)
        return cls(d["neighbors"], d["m"], d.get("gamma", float("nan")))

    @classmethod
    def from_adjacency(cls, adj, m=None, gamma=float("nan")) -> "SimilarityGraph":
        adj = np.asarray(adj, dtype=bool)
        nbrs = [np.flatnonzero(row) for row in adj]
        if m is None:
            m = np.zeros(len(nbrs), dtype=int)
        return cls(nbrs, m, gamma)


def feature_distances(X: np.ndarray, Y: np.ndarray, metric: str = "euclidean") -> np.ndarray:
    """Pairwise feature distance matrix between the rows of ``X`` and ``Y``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if X.shape[1] != Y.shape[1]:
        raise ValueError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]}")
    if metric == "euclidean":
        return cdist(X, Y, "euclidean")
    if metric == "manhattan":
        return cdist(X, Y, "cityblock")
    if metric == "hamming":
        # number of differing coordinates, not scipy's fraction
        return np.rint(cdist(X, Y, "hamming") * X.shape[1])
    raise ValueError(f"unknown feature metric {metric!r}")


def similarity(x, y, metric: str = "euclidean") -> float:
    """exp(-d'(x, y)); 1.0 exactly when the feature vectors coincide."""
    x = np.asarray(x, dtype=float).reshape(1, -1)
    y = np.asarray(y, dtype=float).reshape(1, -1)
    return float(np.exp(-feature_distances(x, y, metric)[0, 0]))


def similar_pairs(X: np.ndarray, gamma: float, metric: str = "euclidean") -> np.ndarray:
    """Boolean matrix of gamma-similar pairs (strict ``s > gamma``, no self-pairs)."""
    S = np.exp(-feature_distances(X, X, metric))
    adj = S > gamma
    np.fill_diagonal(adj, False)
    return adj


def compute_demands(graph: SimilarityGraph, theta: float, k_nominal: int) -> SimilarityGraph:
    """m_v = floor(theta / k * |Gamma(v)|), clamped to [0, |Gamma(v)|]."""
    if not 0.0 < theta <= 1.0:
        raise ValueError(f"theta must lie in (0, 1], got {theta}")
    deg = graph.degrees
    # deg * theta / k with integer-safe flooring for exact ratios like 40 * 0.5 / 5
    m = np.floor(deg * theta / k_nominal + 1e-9).astype(int)
    return graph.with_demands(np.clip(m, 0, deg))


def rescale_demands(graph: SimilarityGraph, k_nominal: int, k_found: int) -> SimilarityGraph:
    """m_v <- min(|Gamma(v)|, floor(m_v * k / k')); records how many points hit the clamp."""
    if k_found < 1:
        raise ValueError("k_found must be >= 1")
    deg = graph.degrees
    scaled = (graph.m * k_nominal) // k_found
    out = graph.with_demands(np.minimum(scaled, deg))
    out.n_clamped = int((scaled > deg).sum())
    return out


def build_graph(ds, cfg: SimilarityConfig) -> SimilarityGraph:
    adj = similar_pairs(ds.fairness_vectors, cfg.gamma, cfg.feature_metric)
    graph = SimilarityGraph.from_adjacency(adj, gamma=cfg.gamma)
    return compute_demands(graph, cfg.theta, cfg.k_nominal)


def fairness_counts(phi, graph: SimilarityGraph) -> np.ndarray:
    """Number of gamma-similar points sharing each point's facility."""
    phi = np.asarray(phi)
    return np.array([np.count_nonzero(phi[nb] == phi[v]) for v, nb in enumerate(graph.neighbors)],
                    dtype=int)


def fairness_satisfied(phi, graph: SimilarityGraph) -> np.ndarray:
    return fairness_counts(phi, graph) >= graph.m
