"""Dense linear programs and a two-phase primal simplex solver.

Models are always ``minimize c @ x`` subject to row constraints and ``x >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csc_matrix
from scipy.sparse.linalg import splu

FEAS_TOL = 1e-7
PIVOT_TOL = 1e-10
DUST = 1e-12  # round-off below this is reset to exact zero
REFACTOR_EVERY = 200
SMALL_PIVOT = 1e-7
SENSES = ("<=", ">=", "=")


@dataclass
class LpModel:
    objective: np.ndarray
    A: np.ndarray
    senses: list[str]
    rhs: np.ndarray

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        self.A = np.asarray(self.A, dtype=float).reshape(-1, self.objective.size)
        self.rhs = np.asarray(self.rhs, dtype=float).reshape(-1)
        self.senses = list(self.senses)
        if not (self.A.shape[0] == len(self.senses) == self.rhs.size):
            raise ValueError("constraint arrays disagree in length")
        bad = [s for s in self.senses if s not in SENSES]
        if bad:
            raise ValueError(f"unknown constraint sense {bad[0]!r}")

    @classmethod
    def from_rows(cls, objective, rows):
        """Build from ``[(coeffs, sense, rhs), ...]``."""
        objective = np.asarray(objective, dtype=float)
        if not rows:
            return cls(objective, np.zeros((0, objective.size)), [], np.zeros(0))
        for coeffs, _, _ in rows:
            if len(coeffs) != objective.size:
                raise ValueError("coefficient vector length != num_vars")
        A = np.array([r[0] for r in rows], dtype=float)
        return cls(objective, A, [r[1] for r in rows], [r[2] for r in rows])

    @property
    def num_vars(self) -> int:
        return self.objective.size

    @property
    def constraints(self):
        return [(self.A[i], self.senses[i], self.rhs[i]) for i in range(len(self.senses))]

    def violation(self, x) -> float:
        """Largest absolute constraint violation of ``x`` (including x >= 0)."""
        x = np.asarray(x, dtype=float)
        lhs = self.A @ x
        worst = max(0.0, float(-x.min())) if x.size else 0.0
        for val, sense, b in zip(lhs, self.senses, self.rhs):
            if sense == "<=":
                worst = max(worst, val - b)
            elif sense == ">=":
                worst = max(worst, b - val)
            else:
                worst = max(worst, abs(val - b))
        return float(worst)

    def to_text(self) -> str:
        """Minimal LP text dump: one objective line, one line per row."""
        fmt = lambda v: " ".join(repr(float(a)) for a in v)  # noqa: E731
        lines = [f"vars {self.num_vars}", f"min {fmt(self.objective)}"]
        for row, sense, b in self.constraints:
            lines.append(f"row {fmt(row)} {sense} {float(b)!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LpModel":
        rows, objective = [], None
        for line in text.splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "min":
                objective = [float(v) for v in parts[1:]]
            elif parts[0] == "row":
                rows.append(([float(v) for v in parts[1:-2]], parts[-2], float(parts[-1])))
        if objective is None:
            raise ValueError("missing objective line")
        return cls.from_rows(objective, rows)


@dataclass
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray
    objective_value: float
    duals: np.ndarray | None = None
    pivots: list[tuple[int, int]] = field(default_factory=list, repr=False)


class _Tableau:
    """Row-reduced tableau ``[B^-1 A | B^-1 b]`` plus a reduced-cost row.

    The tableau is rebuilt from the original data every ``refactor_every``
    pivots so round-off cannot accumulate into spurious pivot elements.
    """

    def __init__(self, A, b, basis, refactor_every=REFACTOR_EVERY):
        m, N = A.shape
        self.A0 = A
        self.b0 = b
        self.rows = np.arange(m)
        self.T = np.zeros((m + 1, N + 1))
        self.T[:m, :N] = A
        self.T[:m, N] = b
        self.basis = list(basis)
        self.costs = np.zeros(N)
        self.pivots = []
        self.refactor_every = refactor_every
        self._since = 0

    @property
    def m(self):
        return self.T.shape[0] - 1

    def set_costs(self, c):
        self.costs = np.asarray(c, dtype=float)
        N = self.T.shape[1] - 1
        row = np.zeros(N + 1)
        row[:N] = self.costs
        row -= self.costs[self.basis] @ self.T[:-1]
        self.T[-1] = row

    def drop_rows(self, keep):
        self.T = np.vstack([self.T[keep], self.T[-1:]])
        self.basis = [self.basis[r] for r in keep]
        self.rows = self.rows[keep]

    def refactor(self):
        A = self.A0[self.rows]
        lu = splu(csc_matrix(A[:, self.basis]))
        body = lu.solve(np.hstack([A, self.b0[self.rows, None]]))
        body[np.abs(body) < DUST] = 0.0
        body[:, -1] = np.maximum(body[:, -1], 0.0)
        body[:, self.basis] = np.eye(len(self.basis))
        self.T[:-1] = body
        self.set_costs(self.costs)
        self._since = 0

    def pivot(self, r, j):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        nz = np.flatnonzero(col)
        cols = np.flatnonzero(T[r])
        if nz.size:
            # only the (pivot column nonzeros) x (pivot row nonzeros) block changes
            idx = np.ix_(nz, cols)
            block = T[idx] - np.outer(col[nz], T[r, cols])
            block[np.abs(block) < DUST] = 0.0
            T[idx] = block
            T[nz, j] = 0.0
        self.basis[r] = j
        self.pivots.append((r, j))
        self._since += 1
        if self._since >= self.refactor_every:
            self.refactor()

    def run(self, allowed: np.ndarray, max_pivots: int, rule: str = "dantzig") -> str:
        """Primal simplex over columns where ``allowed`` is True.

        ``rule="bland"`` prices with Bland's rule throughout. ``"dantzig"``
        takes the most negative reduced cost but falls back to Bland's rule
        after every degenerate pivot, so a degenerate cycle cannot form.
        """
        T = self.T
        degenerate = False
        for _ in range(max_pivots):
            red = T[-1, :-1]
            cand = np.flatnonzero((red < -1e-9) & allowed)
            if cand.size == 0:
                return "optimal"
            if rule == "bland" or degenerate:
                j = int(cand[0])
            else:
                j = int(cand[np.argmin(red[cand])])
            col = T[:-1, j]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if rows.size == 0:
                return "unbounded"
            ratios = np.maximum(T[rows, -1], 0.0) / col[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            r = min(ties, key=lambda i: self.basis[i])
            if col[r] < SMALL_PIVOT and self._since:
                # confirm small pivots on freshly refactored data
                self.refactor()
                continue
            degenerate = best <= 1e-12
            self.pivot(int(r), j)
        raise RuntimeError("simplex pivot limit reached")


def solve(model: LpModel, max_pivots: int = 200_000, rule: str = "dantzig") -> LpSolution:
    """Two-phase simplex; the pivot sequence is fully deterministic."""
    n = model.num_vars
    A = model.A.copy()
    b = model.rhs.copy()
    senses = list(model.senses)
    m = len(senses)
    sign = np.ones(m)
    for i in range(m):
        # ">= 0" rows become "<= 0" so that a slack can start basic
        if b[i] < 0 or (b[i] == 0 and senses[i] == ">="):
            sign[i] = -1.0
            A[i] *= -1
            b[i] *= -1
            senses[i] = {"<=": ">=", ">=": "<=", "=": "="}[senses[i]]

    n_slack = sum(s != "=" for s in senses)
    n_art = sum(s != "<=" for s in senses)
    N = n + n_slack + n_art
    S = np.zeros((m, N))
    S[:, :n] = A
    basis = [0] * m
    k_s, k_a = n, n + n_slack
    for i, s in enumerate(senses):
        if s == "<=":
            S[i, k_s] = 1.0
            basis[i] = k_s
            k_s += 1
        elif s == ">=":
            S[i, k_s] = -1.0
            k_s += 1
        if s != "<=":
            S[i, k_a] = 1.0
            basis[i] = k_a
            k_a += 1
    art_start = n + n_slack

    tab = _Tableau(S, b, basis)
    if n_art:
        c1 = np.zeros(N)
        c1[art_start:] = 1.0
        tab.set_costs(c1)
        tab.run(np.ones(N, dtype=bool), max_pivots, rule)
        if -tab.T[-1, -1] > FEAS_TOL * max(1.0, np.abs(b).max()):
            return LpSolution("infeasible", np.full(n, np.nan), np.nan, pivots=tab.pivots)
        # drive zero-level artificials out of the basis; drop redundant rows
        keep = []
        for r in range(tab.m):
            if tab.basis[r] >= art_start:
                row = tab.T[r, :art_start]
                cols = np.flatnonzero(np.abs(row) > 1e-9)
                if cols.size:
                    tab.pivot(r, int(cols[0]))
                    keep.append(r)
            else:
                keep.append(r)
        if len(keep) < tab.m:
            tab.drop_rows(keep)

    c2 = np.zeros(N)
    c2[:n] = model.objective
    tab.set_costs(c2)
    allowed = np.zeros(N, dtype=bool)
    allowed[:art_start] = True
    status = tab.run(allowed, max_pivots, rule)
    if status == "unbounded":
        return LpSolution("unbounded", np.full(n, np.nan), -np.inf, pivots=tab.pivots)

    # recompute basic values from the original data to shed pivot round-off
    rows = tab.rows
    B = S[rows][:, tab.basis]
    xb = np.linalg.solve(B, b[rows])
    x_full = np.zeros(N)
    x_full[tab.basis] = xb
    x = x_full[:n]
    x[np.abs(x) < 1e-12] = 0.0
    y_std = np.linalg.solve(B.T, c2[tab.basis])
    duals = np.zeros(m)
    duals[rows] = y_std
    duals *= sign
    return LpSolution("optimal", x, float(model.objective @ x), duals, tab.pivots)


def dual_bound(model: LpModel, sol: LpSolution, tol: float = 1e-6):
    """Return ``(b @ y, feasible)`` for the duals attached to an optimal solution.

    Feasibility means ``A.T @ y <= c`` and sign conditions (y >= 0 on ">=" rows,
    y <= 0 on "<=" rows), each within ``tol``.
    """
    y = sol.duals
    if y is None:
        raise ValueError("solution carries no duals")
    ok = bool(np.all(model.A.T @ y <= model.objective + tol))
    for yi, s in zip(y, model.senses):
        if (s == ">=" and yi < -tol) or (s == "<=" and yi > tol):
            ok = False
    return float(model.rhs @ y), ok
