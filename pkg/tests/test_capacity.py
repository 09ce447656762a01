import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st
from scipy.spatial import ConvexHull

from maxweight_ag.capacity import slack
from maxweight_ag.schedules import iq_switch, permutations
from maxweight_ag.utility import UtilityFamily
from maxweight_ag.fluid import rho_condition

from .conftest import G_NAMES, schedule_sets


def facet_slack(abar, S):
    """Largest t - 1 with t * abar inside the hull, from the hull's facet inequalities."""
    hull = ConvexHull(S.vertices.astype(float))
    n, b = hull.equations[:, :-1], hull.equations[:, -1]
    dots = n @ abar
    return float(np.min(-b[dots > 1e-12] / dots[dots > 1e-12])) - 1.0


def check_witness(res, abar):
    assert np.all(res.weights >= 0) and res.weights.sum() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(res.weights @ res.vertices, (1 + res.slack) * np.asarray(abar), atol=1e-9)


def test_examples(unit2):
    r = slack([0.4, 0.4], unit2)
    assert r.slack == pytest.approx(0.25, abs=1e-9) and r.interior
    check_witness(r, [0.4, 0.4])
    r = slack([0.5, 0.5], unit2)
    assert r.slack == pytest.approx(0.0, abs=1e-9) and not r.interior


def test_switch_at_load_09():
    for S in (permutations(2), iq_switch(2)):
        r = slack([0.45] * 4, S)
        assert r.slack == pytest.approx(1 / 0.9 - 1, abs=1e-9)
        check_witness(r, [0.45] * 4)
    # 0.225 per queue is load 0.45 per port
    assert slack([0.225] * 4, permutations(2)).slack == pytest.approx(1 / 0.45 - 1, abs=1e-9)


def test_outside_region_negative(unit2):
    r = slack([1.0, 1.0], unit2)
    assert r.slack == pytest.approx(-0.5, abs=1e-9)
    check_witness(r, [1.0, 1.0])


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(S=schedule_sets(), data=st.data())
def test_matches_facets_and_is_monotone(S, data):
    assume(S.dim >= 2)
    abar = np.array(data.draw(st.lists(st.floats(0.05, 3.0), min_size=S.dim, max_size=S.dim)))
    r = slack(abar, S)
    check_witness(r, abar)
    assert r.slack == pytest.approx(facet_slack(abar, S), abs=1e-7)
    assert slack(1.5 * abar, S).slack <= r.slack + 1e-9
    assert slack(0.5 * abar, S).slack >= r.slack - 1e-9


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(S=schedule_sets(), g=st.sampled_from(G_NAMES), data=st.data())
def test_rho_condition_with_half_slack(S, g, data):
    lam = np.array(data.draw(st.lists(st.floats(0.05, 1.0), min_size=len(S), max_size=len(S))))
    abar = (lam / lam.sum()) @ S.vertices * 0.8
    assume(np.all(abar > 0.01))
    eps = slack(abar, S).slack
    assume(eps > 1e-3)
    q = np.array(data.draw(st.lists(st.floats(0, 5), min_size=S.dim, max_size=S.dim)))
    assume(q.sum() > 0.1)
    u = UtilityFamily.make(1, g, S.dim)
    assert rho_condition(u, S, q, (1 + eps / 2) * abar) > 0
