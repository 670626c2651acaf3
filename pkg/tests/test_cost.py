import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from conftest import make_ds
from fairclust.cost import (CostConfig, Facility, assignment_cost, cost_matrix,
                            data_point_facilities, point_cost, trivially_fair_cost)
from fairclust.fair_assign import Assignment


def test_point_cost_values():
    f = Facility([0.0, 0.0])
    assert point_cost([3.0, 4.0], f, CostConfig(p=1)) == pytest.approx(5.0)
    assert point_cost([3.0, 4.0], f, CostConfig(p=2)) == pytest.approx(25.0)
    assert point_cost([3.0, 4.0], f, CostConfig(p=1, point_metric="manhattan")) == pytest.approx(7.0)
    # p = 0 counts points, including a point sitting on its facility
    assert point_cost([0.0, 0.0], f, CostConfig(p=0)) == 1.0


def test_trivially_fair_picks_median_point():
    ds = make_ds([[0.0], [1.0], [2.0], [10.0]])
    f, c = trivially_fair_cost(ds, data_point_facilities(ds), CostConfig(p=1))
    # centers 1 and 2 both cost 11; ties go to the lower index
    assert f.index == 1 and c == pytest.approx(11.0)


def test_errors():
    ds = make_ds([[0.0, 1.0]])
    with pytest.raises(ValueError):
        cost_matrix(ds, [], CostConfig())
    with pytest.raises(ValueError):
        cost_matrix(ds, [Facility([0.0])], CostConfig())
    with pytest.raises(ValueError):
        CostConfig(p=-1)


def test_assignment_cost_matches_matrix(rng):
    ds = make_ds(rng.random((9, 2)))
    fac = [Facility(x) for x in rng.random((3, 2))]
    phi = rng.integers(0, 3, 9)
    a = Assignment(phi, fac, 0.0, np.ones(9, bool))
    C = cost_matrix(ds, fac, CostConfig())
    assert assignment_cost(ds, a, CostConfig()) == pytest.approx(C[np.arange(9), phi].sum())


@given(hnp.arrays(float, st.tuples(st.integers(2, 10), st.just(2)), elements=st.floats(0, 1)),
       st.floats(0.1, 10), st.integers(1, 3))
def test_cost_scales_with_power(X, lam, p):
    ds, big = make_ds(X), make_ds(X * lam)
    cfg = CostConfig(p=p)
    _, c1 = trivially_fair_cost(ds, data_point_facilities(ds), cfg)
    _, c2 = trivially_fair_cost(big, data_point_facilities(big), cfg)
    assert c2 == pytest.approx(c1 * lam ** p, rel=1e-9, abs=1e-12)
