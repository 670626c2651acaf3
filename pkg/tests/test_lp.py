import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import lp_by_vertices
from fairclust import lp


def random_feasible_lp(rng, n_vars=None, n_rows=None):
    """Random LP with a known feasible point and a bounding row so the optimum is finite."""
    n = n_vars or int(rng.integers(1, 9))
    m = n_rows or int(rng.integers(1, 7))
    A = np.round(rng.normal(size=(m - 1, n)), 3)
    senses = list(rng.choice(["<=", ">=", "="], size=m - 1))
    x0 = rng.random(n)
    b = A @ x0
    for i, s in enumerate(senses):
        if s == "<=":
            b[i] += rng.random()
        elif s == ">=":
            b[i] -= rng.random()
    A = np.vstack([A, np.ones(n)])
    b = np.append(b, x0.sum() + 1 + rng.random())
    senses.append("<=")
    c = np.round(rng.normal(size=n), 3)
    return lp.LpModel(c, A, senses, b), x0


def test_textbook_instance():
    # max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), value 36
    m = lp.LpModel.from_rows([-3, -5], [([1, 0], "<=", 4), ([0, 2], "<=", 12),
                                        ([3, 2], "<=", 18)])
    sol = lp.solve(m)
    assert sol.status == "optimal"
    np.testing.assert_allclose(sol.x, [2, 6], atol=1e-9)
    assert sol.objective_value == pytest.approx(-36)
    bound, ok = lp.dual_bound(m, sol)
    assert ok and bound == pytest.approx(-36)


def test_infeasible_and_unbounded():
    m = lp.LpModel.from_rows([1, 1], [([1, 1], "<=", 1), ([1, 1], ">=", 2)])
    assert lp.solve(m).status == "infeasible"
    m = lp.LpModel.from_rows([-1, 0], [([1, -1], "<=", 1)])
    assert lp.solve(m).status == "unbounded"


def test_redundant_equalities():
    m = lp.LpModel.from_rows([1, 2], [([1, 1], "=", 1), ([2, 2], "=", 2)])
    sol = lp.solve(m)
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(1)


def test_degenerate_cycling_example():
    # Beale's example cycles under the textbook largest-coefficient rule
    c = [-0.75, 150, -0.02, 6]
    rows = [([0.25, -60, -0.04, 9], "<=", 0), ([0.5, -90, -0.02, 3], "<=", 0),
            ([0, 0, 1, 0], "<=", 1)]
    for rule in ("dantzig", "bland"):
        sol = lp.solve(lp.LpModel.from_rows(c, rows), rule=rule)
        assert sol.objective_value == pytest.approx(-0.05)


def test_text_roundtrip():
    m = lp.LpModel.from_rows([1, -2.5], [([1, 1], ">=", 0.5), ([3, 0], "=", 1)])
    again = lp.LpModel.from_text(m.to_text())
    assert again.to_text() == m.to_text()


def test_violation():
    m = lp.LpModel.from_rows([0, 0], [([1, 1], "<=", 1)])
    assert m.violation([1, 1]) == pytest.approx(1)
    assert m.violation([-0.5, 0]) == pytest.approx(0.5)


@given(st.integers(0, 10 ** 6))
def test_matches_vertex_enumeration(seed):
    rng = np.random.default_rng(seed)
    model, x0 = random_feasible_lp(rng)
    sol = lp.solve(model)
    ref, _ = lp_by_vertices(model.objective, model.A, model.senses, model.rhs)
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(ref, abs=1e-6)
    assert model.violation(sol.x) < 1e-7
    assert sol.objective_value <= model.objective @ x0 + 1e-9
    bound, ok = lp.dual_bound(model, sol)
    assert ok and bound <= sol.objective_value + 1e-6


@given(st.integers(0, 10 ** 6))
def test_bland_and_dantzig_agree(seed):
    model, _ = random_feasible_lp(np.random.default_rng(seed))
    a = lp.solve(model, rule="bland").objective_value
    b = lp.solve(model, rule="dantzig").objective_value
    assert a == pytest.approx(b, abs=1e-7)


def test_deterministic_pivots(rng):
    model, _ = random_feasible_lp(rng, 8, 6)
    assert lp.solve(model).pivots == lp.solve(model).pivots
