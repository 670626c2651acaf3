"""Hard instances from Satisfactory-Partition graphs, with exhaustive checkers on both sides.

Graph vertex v_i becomes point u_i; two facilities ``l`` (column 0) and ``r``
(column 1) are placed so that every non-trivial split costs strictly less or
strictly more than the all-in-one-cluster cost ``A`` on one side of the
orientation.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .fair_assign import brute_force_from_costs
from .similarity import SimilarityGraph, similar_pairs


@dataclass
class SpInstance:
    n: int
    edges: list[tuple[int, int]]
    lam: np.ndarray

    def __post_init__(self):
        self.edges = sorted({(min(a, b), max(a, b)) for a, b in self.edges if a != b})
        self.lam = np.asarray(self.lam, dtype=int)
        if self.lam.shape != (self.n,):
            raise ValueError("one lambda per vertex required")
        if any(not (0 <= a < self.n and 0 <= b < self.n) for a, b in self.edges):
            raise ValueError("edge endpoint out of range")

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=bool)
        for a, b in self.edges:
            adj[a, b] = adj[b, a] = True
        return adj

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency().sum(1)


@dataclass
class IfcInstance:
    source: SpInstance
    p: int
    beta: float
    distances: np.ndarray  # n x 2, columns (l, r)
    features: np.ndarray
    gamma: float
    graph: SimilarityGraph
    A: float

    @property
    def costs(self) -> np.ndarray:
        return self.distances ** self.p

    def to_json(self) -> str:
        d = json.loads(self.graph.to_json())
        d.update({"distances": self.distances.tolist(), "facilities": ["l", "r"],
                  "p": self.p, "beta": self.beta, "A": self.A,
                  "edges": [list(e) for e in self.source.edges],
                  "lambda": self.source.lam.tolist()})
        return json.dumps(d)


def random_sp_instance(rng, n: int, edge_prob: float = 0.5) -> SpInstance:
    adj = np.triu(rng.random((n, n)) < edge_prob, 1)
    edges = [tuple(map(int, e)) for e in zip(*np.nonzero(adj))]
    deg = (adj | adj.T).sum(1)
    lam = np.array([rng.integers(0, d + 1) for d in deg])
    return SpInstance(n, edges, lam)


def edge_features(sp: SpInstance, literal: bool = False):
    """Fairness features and gamma for the reduction.

    ``literal=True`` gives one indicator feature per edge with gamma from the
    edge count. Under hamming distance two non-adjacent low-degree vertices
    can then still be gamma-similar, so by default every vertex also gets
    ``D - deg`` private features (D the max degree). Every vector then has D
    ones and the hamming distance is 2D - 2 for edges and 2D otherwise.
    """
    deg = sp.degrees
    m = len(sp.edges)
    if literal:
        X = np.zeros((sp.n, max(m, 1)))
        for e, (a, b) in enumerate(sp.edges):
            X[a, e] = X[b, e] = 1.0
        return X, (math.exp(-m) + math.exp(-(m - 1))) / 2
    D = max(int(deg.max()), 1)
    pads = D - deg
    X = np.zeros((sp.n, m + int(pads.sum())))
    for e, (a, b) in enumerate(sp.edges):
        X[a, e] = X[b, e] = 1.0
    col = m
    for v in range(sp.n):
        X[v, col:col + pads[v]] = 1.0
        col += pads[v]
    return X, (math.exp(-2 * D) + math.exp(-(2 * D - 2))) / 2


def reduce_to_ifc(sp: SpInstance, p: int = 1, beta: float | None = None,
                  literal: bool = False) -> IfcInstance:
    n = sp.n
    if n < 2:
        raise ValueError("need at least two vertices")
    if p < 1:
        raise ValueError("p must be a positive integer")
    c = math.ceil(n / 2)
    lo = (c + 1) / 2
    beta = lo if beta is None else beta
    if beta < lo:
        raise ValueError(f"beta must be >= {lo}, got {beta}")
    i = np.arange(1, n + 1)
    dl = np.where(i <= c + 1, c + beta, beta) ** (1 / p)
    dr = np.where(i <= n // 2, beta, c + beta + 1) ** (1 / p)
    X, gamma = edge_features(sp, literal)
    adj = similar_pairs(X, gamma, "hamming")
    graph = SimilarityGraph.from_adjacency(adj, sp.lam, gamma)
    A = float(c * (c + 1) + n * beta)
    return IfcInstance(sp, p, float(beta), np.column_stack([dl, dr]), X, gamma, graph, A)


def completed_metric(inst: IfcInstance) -> np.ndarray:
    """Shortest-path closure over points u_1..u_n, then l, then r.

    Point-point and l-r distances are not part of the construction; the
    closure is the smallest metric consistent with the given point-facility
    distances, if one exists.
    """
    n = inst.source.n
    W = np.full((n + 2, n + 2), np.inf)
    np.fill_diagonal(W, 0.0)
    W[:n, n:] = inst.distances
    W[n:, :n] = inst.distances.T
    for k in range(n + 2):
        W = np.minimum(W, W[:, [k]] + W[[k], :])
    return W


def triangle_violation(inst: IfcInstance) -> float:
    """Largest amount by which the given point-facility distances exceed a detour.

    Zero means the construction extends to a metric (the closure keeps every
    given distance), hence all triples satisfy the triangle inequality.
    """
    W = completed_metric(inst)
    n = inst.source.n
    shrink = float((inst.distances - W[:n, n:]).max())
    trip = float((W[:, None, :] - W[:, :, None] - W[None, :, :]).max())
    return max(shrink, trip, 0.0)


def brute_force_satisfactory_partition(sp: SpInstance):
    """Non-trivial (V1, V2) with every vertex keeping >= lambda_v neighbours on its side, or None.

    Vertex 0 is fixed in V1, so each bipartition is visited once.
    """
    n = sp.n
    if n > 20:
        raise ValueError("satisfactory-partition brute force limited to n <= 20")
    adj = sp.adjacency()
    for rest in itertools.product((False, True), repeat=n - 1):
        side = np.array((False,) + rest)
        if side.all() or not side.any():
            continue
        same = (adj & (side[:, None] == side[None, :])).sum(1)
        if (same >= sp.lam).all():
            return np.flatnonzero(~side).tolist(), np.flatnonzero(side).tolist()
    return None


def fair_clustering_below(inst: IfcInstance, tol: float = 1e-9):
    """Exact check for a fair assignment to {l, r} of cost strictly below A."""
    best = brute_force_from_costs(inst.costs, inst.graph)
    if best is None or best.cost >= inst.A - tol * inst.A:
        return None
    return best
