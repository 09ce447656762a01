"""Fluid model of MaxWeight-(alpha, g), its Lyapunov certificate, and the
comparison of scaled stochastic paths against fluid trajectories.

The fluid state follows ``dq_j/dt = abar_j - sigma*_j(q)`` while ``q_j > 0``,
where ``sigma*(q)`` maximizes the policy objective over the *untruncated*
hull ``<S>``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import capacity
from .errors import DerivativeUndefined, NoSlackError
from .schedules import ScheduleSet
from .simulator import simulate
from .solver import DEFAULT_TOL, FractionalSchedule, maximize
from .utility import UtilityFamily, weight

log = logging.getLogger(__name__)

DEFAULT_H = 1e-3


def sigma_star(u: UtilityFamily, S: ScheduleSet, q, tol=DEFAULT_TOL) -> FractionalSchedule:
    q = np.asarray(q, dtype=float)
    if np.any(q < 0):
        raise ValueError("fluid state must be nonnegative")
    return maximize(u, weight(u, q), S, tol=tol)[0]


# -- Lyapunov function ----------------------------------------------------------


def lyapunov_coefficients(u: UtilityFamily, rho) -> np.ndarray:
    """``g'_j(rho_j)`` for every queue; must be finite and positive."""
    c = u.derivative(np.asarray(rho, dtype=float))
    if not np.all(np.isfinite(c)) or np.any(c <= 0):
        raise DerivativeUndefined(f"g' is not finite and positive at rho={list(rho)}")
    return c


def lyapunov(u: UtilityFamily, rho, q) -> float:
    """``L(q) = sum_j g'_j(rho_j) q_j^(1+alpha) / (1+alpha)``."""
    c = lyapunov_coefficients(u, rho)
    q = np.asarray(q, dtype=float)
    return float(np.sum(c * q ** (1 + u.alpha)) / (1 + u.alpha))


def norm_alpha(u, rho, q) -> float:
    """``(sum_j g'_j(rho_j) q_j^alpha)^(1/alpha)``."""
    c = lyapunov_coefficients(u, rho)
    return float(np.sum(c * np.asarray(q, dtype=float) ** u.alpha) ** (1 / u.alpha))


def norm_one_plus_alpha(u, rho, q) -> float:
    return lyapunov(u, rho, q) ** (1 / (1 + u.alpha))


def rho_condition(u, S, q, rho, tol=DEFAULT_TOL) -> float:
    """``(sigma*(q) - rho) . grad G_q(rho)``; positive for interior ``rho`` and ``q != 0``."""
    s = sigma_star(u, S, q, tol).point
    grad = lyapunov_coefficients(u, rho) * weight(u, q)
    return float((s - np.asarray(rho, dtype=float)) @ grad)


@dataclass
class LyapunovCertificate:
    epsilon: float
    rho: list
    gamma: float
    K_L: float
    T: float
    epsilon_star: float
    alpha: float

    def to_dict(self):
        return asdict(self)


def gamma_constant(alpha: float, n_queues: int) -> float:
    """Norm-equivalence constant ``(1+alpha)^(1/(1+alpha)) / |J|``."""
    return (1 + alpha) ** (1 / (1 + alpha)) / n_queues


def certificate(u: UtilityFamily, S: ScheduleSet, abar, epsilon: float) -> LyapunovCertificate:
    """Constants of the fluid-stability bound for slack ``epsilon``.

    ``T`` bounds the time for any fluid path with ``||q(0)||_1 = 1`` to empty.
    ``epsilon`` must satisfy ``0 < epsilon <= epsilon*``.
    """
    abar = np.asarray(abar, dtype=float)
    if not epsilon > 0:
        raise NoSlackError(f"epsilon must be positive, got {epsilon}")
    eps_star = capacity.slack(abar, S).slack
    if epsilon > eps_star + 1e-9:
        raise ValueError(f"epsilon={epsilon} exceeds the capacity slack {eps_star}")
    rho = (1 + epsilon) * abar
    a = u.alpha
    c = lyapunov_coefficients(u, rho)
    gamma = gamma_constant(a, S.dim)
    K_L = float(c.max() / (1 + a))
    T = (1 + a) * K_L ** (1 / (1 + a)) / (epsilon * gamma**a)
    return LyapunovCertificate(float(epsilon), rho.tolist(), gamma, K_L, float(T), eps_star, a)


def default_certificate(u, S, abar, fraction=0.5) -> LyapunovCertificate:
    """Certificate with ``epsilon = fraction * epsilon*`` (default half the slack,
    keeping ``rho`` strictly inside the capacity region)."""
    eps_star = capacity.slack(abar, S).slack
    if eps_star <= 0:
        raise NoSlackError(f"arrival rate is not interior (slack {eps_star:.3g})")
    return certificate(u, S, abar, fraction * eps_star)


# -- integration ------------------------------------------------------------------


@dataclass
class FluidTrajectory:
    t: np.ndarray
    q: np.ndarray
    L: np.ndarray | None = None
    absorbed_at: float | None = None

    def at(self, times) -> np.ndarray:
        """Linear interpolation of the path at ``times``; held constant past the end."""
        times = np.asarray(times, dtype=float)
        return np.stack([np.interp(times, self.t, self.q[:, j]) for j in range(self.q.shape[1])], axis=-1)

    def emptying_time(self) -> float | None:
        empty = np.flatnonzero(self.q.sum(axis=1) > 0)
        if len(empty) == len(self.t):
            return None
        return float(self.t[empty[-1] + 1]) if len(empty) else 0.0

    def rows(self):
        L = self.L if self.L is not None else np.full(len(self.t), np.nan)
        for t, q, l in zip(self.t, self.q, L):
            yield [repr(float(t))] + [repr(float(x)) for x in q] + [repr(float(l))]


def integrate(q0, abar, u: UtilityFamily, S: ScheduleSet, h=DEFAULT_H, t_end=1.0, tol=DEFAULT_TOL, rho=None):
    """Explicit Euler with projection onto the nonnegative orthant.

    A coordinate pushed below zero is clipped to zero, so an empty queue with
    negative drift stays empty. Once ``||q||_1 <= h * ||abar||_1`` (one
    step's worth of arrivals) the state is set to zero and held there for the
    rest of the horizon; without this the discrete path chatters at O(h)
    around the origin instead of resting there. If ``rho`` is given
    the Lyapunov function is recorded along the path.
    """
    q = np.asarray(q0, dtype=float).copy()
    abar = np.asarray(abar, dtype=float)
    if not h > 0:
        raise ValueError("step must be positive")
    n = int(round(t_end / h))
    absorb = h * abar.sum()
    w_pow = u.alpha
    t = np.arange(n + 1) * h
    Q = np.zeros((n + 1, len(q)))
    absorbed_at = None
    k = 0
    while True:
        if q.sum() <= absorb:
            q[:] = 0.0
            absorbed_at = float(t[k])
            break
        Q[k] = q
        if k == n:
            break
        s = maximize(u, q**w_pow, S, tol=tol)[0].point
        q = np.maximum(q + h * (abar - s), 0.0)
        k += 1
    L = None
    if rho is not None:
        c = lyapunov_coefficients(u, rho)
        L = (Q ** (1 + w_pow)) @ c / (1 + w_pow)
    return FluidTrajectory(t, Q, L, absorbed_at)


# -- scaled comparison --------------------------------------------------------------


def scaled_initial(shape, c: int) -> np.ndarray:
    """Integer vector summing to ``c`` closest to ``c * shape / ||shape||_1``
    (largest remainder rounding, ties to the lower index)."""
    shape = np.asarray(shape, dtype=float)
    x = c * shape / shape.sum()
    base = np.floor(x).astype(np.int64)
    rem = c - int(base.sum())
    order = np.argsort(-(x - base), kind="stable")
    base[order[:rem]] += 1
    return base


def scaled_distance(trace_Q: np.ndarray, fluid: FluidTrajectory, c: int) -> float:
    """``sup_k ||Q(k)/c - q(k/c)||_1`` over the recorded slots."""
    times = np.arange(len(trace_Q)) / c
    return float(np.abs(trace_Q / c - fluid.at(times)).sum(axis=1).max())


def compare_scaled(u, S, arrivals, shape, c_list, t_end, seeds, h=DEFAULT_H, tol=DEFAULT_TOL) -> dict:
    """For each ``c``: sup-distance between ``Q(floor(ct))/c`` and the fluid path
    from the same initial point, one entry per seed.

    Returns ``{c: [distance per seed]}``.
    """
    out = {}
    for c in c_list:
        Q0 = scaled_initial(shape, c)
        fl = integrate(Q0 / c, arrivals.mean, u, S, h=h, t_end=t_end, tol=tol)
        horizon = int(math.floor(c * t_end))
        dists = []
        for seed in seeds:
            tr = simulate(u, S, arrivals, Q0, horizon, seed, tol=tol)
            dists.append(scaled_distance(tr.Q, fl, c))
        out[int(c)] = dists
        log.info("c=%d: distances %s", c, np.round(dists, 4).tolist())
    return out
