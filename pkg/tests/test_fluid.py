import math

import numpy as np
import pytest

from maxweight_ag import fluid
from maxweight_ag.arrivals import ArrivalModel
from maxweight_ag.errors import DerivativeUndefined, NoSlackError
from maxweight_ag.schedules import ScheduleSet, iq_switch, single
from maxweight_ag.solver import brute_force_max
from maxweight_ag.utility import UtilityFamily, weight

ONE = ScheduleSet([(0,), (1,)])


def lin(J, alpha=1):
    return UtilityFamily.make(alpha, "linear", J)


def test_sigma_star_examples(unit2):
    np.testing.assert_array_equal(fluid.sigma_star(lin(2), unit2, [0.7, 0.2]).point, [1, 0])
    u = UtilityFamily.make(1, "log", 2)
    oracle = brute_force_max(u, weight(u, [3, 1]), unit2, grid=1000)
    np.testing.assert_allclose(oracle, [0.75, 0.25])
    np.testing.assert_allclose(fluid.sigma_star(u, unit2, [3, 1]).point, oracle, atol=1e-6)
    assert fluid.sigma_star(u, unit2, [0, 0]).support == [((0, 0), 1.0)]


def test_sigma_star_ignores_queue_size():
    # the fluid optimum is not truncated by small q
    S = ScheduleSet([(0, 0), (2, 0), (0, 2)])
    np.testing.assert_array_equal(fluid.sigma_star(lin(2), S, [0.1, 0.05]).point, [2, 0])


def test_lyapunov_examples():
    assert fluid.lyapunov(lin(2), [0.5, 0.5], [1, 1]) == 1.0
    assert fluid.lyapunov(lin(2), [0.5, 0.5], [1, 0]) == 0.5
    assert fluid.lyapunov(UtilityFamily.make(1, "log", 2), [0.5, 0.5], [1, 1]) == pytest.approx(2.0)
    assert fluid.lyapunov(lin(2), [0.5, 0.5], [0, 0]) == 0.0
    with pytest.raises(DerivativeUndefined):
        fluid.lyapunov(UtilityFamily.make(1, "log", 2), [0.5, 0.0], [1, 1])


def test_norms_relation():
    u = UtilityFamily.make(2, "log", 3)
    rho, q = [0.2, 0.3, 0.1], [0.5, 0.1, 0.4]
    assert fluid.norm_one_plus_alpha(u, rho, q) ** 3 == pytest.approx(fluid.lyapunov(u, rho, q))
    c = np.array([5.0, 1 / 0.3, 10.0])
    assert fluid.norm_alpha(u, rho, q) == pytest.approx(np.sqrt(c @ np.array(q) ** 2))


def test_certificate_worked_example(unit2):
    cert = fluid.certificate(lin(2), unit2, [0.4, 0.4], 0.25)
    assert cert.epsilon_star == pytest.approx(0.25, abs=1e-9)
    assert cert.gamma == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    assert cert.K_L == 0.5
    assert cert.T == pytest.approx(8.0, abs=1e-6)
    np.testing.assert_allclose(cert.rho, [0.5, 0.5])
    half = fluid.default_certificate(lin(2), unit2, [0.4, 0.4])
    assert half.epsilon == pytest.approx(0.125) and half.T == pytest.approx(16.0)


def test_certificate_constants():
    assert fluid.gamma_constant(1, 4) == pytest.approx(math.sqrt(2) / 4, abs=1e-12)
    S = iq_switch(2)
    cert = fluid.default_certificate(UtilityFamily.make(2, "log", 4), S, [0.2, 0.1, 0.1, 0.3])
    rho = np.array(cert.rho)
    assert cert.K_L == pytest.approx(np.max(1 / rho) / 3)
    assert cert.T == pytest.approx(3 * cert.K_L ** (1 / 3) / (cert.epsilon * cert.gamma**2))


def test_certificate_errors(unit2):
    with pytest.raises(NoSlackError):
        fluid.certificate(lin(2), unit2, [0.4, 0.4], 0.0)
    with pytest.raises(NoSlackError):
        fluid.default_certificate(lin(2), unit2, [0.5, 0.5])
    with pytest.raises(ValueError):
        fluid.certificate(lin(2), unit2, [0.4, 0.4], 0.3)


def test_integrate_single_queue():
    h = 1e-3
    tr = fluid.integrate([1.0], [0.5], lin(1), ONE, h=h, t_end=3.0)
    assert abs(tr.emptying_time() - 2.0) <= h
    live = tr.t < 1.99
    np.testing.assert_allclose(tr.q[live, 0], 1 - 0.5 * tr.t[live], atol=1e-9)
    assert np.all(tr.q[tr.t >= 2.0 + h] == 0)


def test_integrate_log_symmetric(unit2):
    u = UtilityFamily.make(1, "log", 2)
    np.testing.assert_allclose(brute_force_max(u, [1, 1], unit2, grid=1000), [0.5, 0.5])
    h = 1e-3
    tr = fluid.integrate([0.5, 0.5], [0.25, 0.25], u, unit2, h=h, t_end=3.0)
    np.testing.assert_allclose(tr.q[:, 0], tr.q[:, 1], atol=1e-9)
    for j in range(2):
        last_positive = tr.t[np.flatnonzero(tr.q[:, j] > 0)[-1]]
        assert abs(last_positive - 2.0) <= 10 * h


def test_absorption_and_emptying_bound(unit2):
    cert = fluid.certificate(lin(2), unit2, [0.4, 0.4], 0.25)
    for q0 in ([1.0, 0.0], [0.5, 0.5], [0.2, 0.8]):
        tr = fluid.integrate(q0, [0.4, 0.4], lin(2), unit2, t_end=1.2 * cert.T, rho=cert.rho)
        empty = tr.emptying_time()
        assert empty is not None and empty <= cert.T
        assert np.all(tr.q[tr.t >= empty] == 0)
        assert np.all(np.diff(tr.L) <= 2e-3)
    # known MaxWeight fluid path from (1, 0): equalize at t=1, then drain at rate 0.2
    tr = fluid.integrate([1.0, 0.0], [0.4, 0.4], lin(2), unit2, t_end=6.0)
    assert tr.emptying_time() == pytest.approx(5.0, abs=0.01)
    np.testing.assert_allclose(tr.at([1.0])[0], [0.4, 0.4], atol=2e-3)


def _drift_check(u, S, abar, q0, t_end, h=1e-3):
    cert = fluid.default_certificate(u, S, abar)
    rho, eps, a = np.array(cert.rho), cert.epsilon, u.alpha
    c = fluid.lyapunov_coefficients(u, rho)
    tr = fluid.integrate(q0, abar, u, S, h=h, t_end=t_end, rho=rho)
    D = np.asarray(abar) + S.vertices.max(axis=0)  # drift bound per queue
    checked = 0
    for k in range(len(tr.t) - 1):
        q, qn = tr.q[k], tr.q[k + 1]
        if q.sum() == 0 or qn.sum() == 0 or np.any((qn == 0) & (q > 0)):
            continue  # absorbed or clipped steps leave the smooth regime
        rate = (tr.L[k + 1] - tr.L[k]) / h
        bound = -eps * np.sum(np.asarray(abar) * c * q**a)
        curv = np.sum(c * a * np.maximum(q, qn) ** (a - 1) * D**2) / 2
        assert rate <= bound + 2 * curv * h
        checked += 1
    assert checked > 100


@pytest.mark.parametrize("alpha", [1, 2])
@pytest.mark.parametrize("g", ["linear", "log", "power:2"])
def test_drift_inequality(alpha, g):
    S = iq_switch(2)
    _drift_check(UtilityFamily.make(alpha, g, 4), S, [0.3, 0.15, 0.2, 0.25], [0.4, 0.1, 0.3, 0.2], 8.0)


def test_drift_bound_needs_rate_factor(unit2):
    # at a MaxWeight tie the unweighted form -eps * sum g'(rho) q^alpha is too strong
    u, abar, eps = lin(2), np.array([0.4, 0.4]), 0.25
    q = np.array([1.0, 1.0])
    s = fluid.sigma_star(u, unit2, q).point
    dL = float(np.sum((abar - s) * q))
    assert dL == pytest.approx(-0.2)
    assert dL > -eps * q.sum()
    assert dL <= -eps * float(abar @ q) + 1e-12


def test_scaled_initial():
    np.testing.assert_array_equal(fluid.scaled_initial([1, 1, 1], 10), [4, 3, 3])
    np.testing.assert_array_equal(fluid.scaled_initial([0.4, 0.1, 0.2, 0.3], 50), [20, 5, 10, 15])
    assert fluid.scaled_initial([0.3, 0.7], 801).sum() == 801


def test_compare_scaled_single_queue():
    d = fluid.compare_scaled(lin(1), ONE, ArrivalModel.bernoulli([0.5]), [1], [50, 200, 800], 3.0, seeds=range(3))
    med = [np.median(d[c]) for c in (50, 200, 800)]
    assert med[0] > med[1] > med[2] and med[2] <= 0.1


def test_compare_scaled_deterministic():
    S = ScheduleSet([(0,), (2,)])
    arr = ArrivalModel.deterministic([1])
    for c in (10, 100, 1000):
        d = fluid.compare_scaled(lin(1), S, arr, [1], [c], 2.0, seeds=[0])[c][0]
        assert d <= (2 + 1) / c + 1e-12
