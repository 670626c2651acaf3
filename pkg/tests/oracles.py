"""Slow, obviously-correct reference implementations used only by the tests."""

import itertools

import numpy as np


def lp_by_vertices(c, A, senses, b, tol=1e-9):
    """Minimum of c @ x over {x >= 0, rows} by enumerating basic solutions.

    Returns ``(value, x)`` or ``(None, None)`` when no vertex is feasible.
    Only valid for bounded problems with a vertex optimum.
    """
    c = np.asarray(c, float)
    n = c.size
    A = np.asarray(A, float).reshape(-1, n)
    b = np.asarray(b, float)
    # a vertex is where n linearly independent constraints (rows or bounds) are tight;
    # equality rows need not be among them when they are redundant
    rows = np.vstack([A, np.eye(n)])
    rhs = np.concatenate([b, np.zeros(n)])
    combos = np.array(list(itertools.combinations(range(len(rows)), n)), dtype=int)
    M, r = rows[combos], rhs[combos]
    good = np.abs(np.linalg.det(M)) > 1e-10
    if not good.any():
        return None, None
    X = np.linalg.solve(M[good], r[good][..., None])[..., 0]
    lhs = X @ A.T
    slack = tol * (1 + np.abs(b))
    ok = X.min(axis=1) >= -tol
    for i, s in enumerate(senses):
        if s == "<=":
            ok &= lhs[:, i] <= b[i] + slack[i]
        elif s == ">=":
            ok &= lhs[:, i] >= b[i] - slack[i]
        else:
            ok &= np.abs(lhs[:, i] - b[i]) <= slack[i]
    if not ok.any():
        return None, None
    vals = X[ok] @ c
    j = int(np.argmin(vals))
    return float(vals[j]), X[ok][j]


def fair_assignment_oracle(C, neighbors, m):
    """Exhaustive min-cost assignment meeting every demand; ties to the smallest phi."""
    C = np.asarray(C, float)
    n, K = C.shape
    best, arg = None, None
    for phi in itertools.product(range(K), repeat=n):
        if all(sum(phi[u] == phi[v] for u in neighbors[v]) >= m[v] for v in range(n)):
            cost = sum(C[v, phi[v]] for v in range(n))
            if best is None or cost < best:
                best, arg = cost, phi
    return best, arg


def kcenter_radius(D, k):
    """Optimal k-center radius with centers restricted to the points."""
    n = D.shape[0]
    return min(D[:, list(S)].min(1).max() for S in itertools.combinations(range(n), k))


def best_two_partition(X):
    """Minimum within-cluster sum of squares over all 2-partitions."""
    n = len(X)
    best = np.inf
    for mask in range(1, 2 ** (n - 1)):
        side = np.array([(mask >> i) & 1 for i in range(n)], bool)
        cost = sum(((X[s] - X[s].mean(0)) ** 2).sum() for s in (side, ~side))
        best = min(best, cost)
    return best


def satisfactory_partitions(n, edges, lam):
    """All non-trivial bipartitions {V1, V2} (V1 holding vertex 0) that are satisfactory."""
    nb = {v: set() for v in range(n)}
    for a, b in edges:
        nb[a].add(b)
        nb[b].add(a)
    found = []
    for r in range(1, n):
        for rest in itertools.combinations(range(1, n), r - 1):
            V1 = {0, *rest}
            if len(V1) == n:
                continue
            V2 = set(range(n)) - V1
            if all(len(nb[v] & (V1 if v in V1 else V2)) >= lam[v] for v in range(n)):
                found.append((sorted(V1), sorted(V2)))
    return found
