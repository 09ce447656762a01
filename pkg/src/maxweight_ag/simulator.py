"""Discrete-time simulation of a switched network under MaxWeight-(alpha, g).

Slot ``t`` picks ``sigma(t)`` from ``S ∧ Q(t-1)`` using the pre-arrival
state, then ``Q(t) = Q(t-1) - sigma(t) + a(t)``.
"""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .arrivals import ArrivalModel
from .errors import DimensionMismatch, NegativeQueue
from .policy import Policy, PolicyDecision
from .schedules import ScheduleSet
from .solver import DEFAULT_TOL
from .utility import UtilityFamily

log = logging.getLogger(__name__)

CHUNK = 4096


def default_kappa(abar) -> float:
    abar = np.asarray(abar, dtype=float)
    return 10.0 * float(abar.sum()) * len(abar)


def apply(Q, sigma, a) -> np.ndarray:
    """One step of the queue recursion; a negative result is a policy bug."""
    out = np.asarray(Q, dtype=np.int64) - np.asarray(sigma, dtype=np.int64) + np.asarray(a, dtype=np.int64)
    if np.any(out < 0):
        raise NegativeQueue(f"queue went negative: Q={list(Q)} sigma={list(sigma)} a={list(a)}")
    return out


def step(Q, u: UtilityFamily, S: ScheduleSet, arrivals: ArrivalModel, tol, rng, policy=None):
    """Advance one slot. Returns ``(Q_next, record)``.

    ``record`` holds ``sigma``, ``sigma_bar`` (the fractional optimum) and ``a``.
    """
    policy = policy or Policy(u, S, tol)
    Q = np.asarray(Q, dtype=np.int64)
    decision: PolicyDecision = policy.act(Q, rng.random())
    a = arrivals.draw(rng, 1)[0]
    return apply(Q, decision.sigma, a), {"sigma": decision.sigma, "sigma_bar": decision.sigma_bar.point, "a": a}


@dataclass
class SimTrace:
    """Per-slot records (row ``t-1`` holds slot ``t``) plus summary statistics.

    ``Q`` has ``horizon + 1`` rows starting with ``Q(0)``. Per-slot arrays are
    ``None`` when the run was not recorded.
    """

    Q: np.ndarray | None
    sigma: np.ndarray | None
    sbar: np.ndarray | None
    summary: dict = field(default_factory=dict)

    def write_csv(self, path):
        if self.Q is None:
            raise ValueError("trace was not recorded")
        J = self.Q.shape[1]
        header = ["t"] + [f"Q_{j + 1}" for j in range(J)]
        header += [f"sigma_{j + 1}" for j in range(J)] + [f"sbar_{j + 1}" for j in range(J)]
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(header)
            for t in range(1, self.Q.shape[0]):
                wr.writerow(
                    [t]
                    + self.Q[t].tolist()
                    + self.sigma[t - 1].tolist()
                    + [repr(float(x)) for x in self.sbar[t - 1]]
                )

    def write_summary(self, path):
        with open(path, "w") as fh:
            json.dump(self.summary, fh, indent=2, sort_keys=True)
            fh.write("\n")


def simulate(
    u: UtilityFamily,
    S: ScheduleSet,
    arrivals: ArrivalModel,
    q0,
    horizon: int,
    seed: int,
    tol: float = DEFAULT_TOL,
    kappa: float | None = None,
    record: bool = True,
    policy: Policy | None = None,
) -> SimTrace:
    """Run ``horizon`` slots from ``q0``; reproducible given all arguments.

    Arrivals and the policy's uniforms come from two independent streams
    spawned from ``seed``.
    """
    q = np.asarray(q0, dtype=np.int64).copy()
    J = S.dim
    if q.shape != (J,) or arrivals.dim != J or u.dim != J:
        raise DimensionMismatch("scenario dimensions disagree")
    if np.any(q < 0):
        raise ValueError("initial queue must be nonnegative")
    policy = policy or Policy(u, S, tol)
    kappa = default_kappa(arrivals.mean) if kappa is None else float(kappa)
    arr_ss, pol_ss = np.random.SeedSequence(seed).spawn(2)
    arr_rng, pol_rng = np.random.default_rng(arr_ss), np.random.default_rng(pol_ss)

    if record:
        Qs = np.empty((horizon + 1, J), dtype=np.int64)
        sig = np.empty((horizon, J), dtype=np.int64)
        sb = np.empty((horizon, J), dtype=float)
        Qs[0] = q
    l1 = np.empty(horizon, dtype=np.int64)
    served = np.zeros(J, dtype=np.int64)
    arrived = np.zeros(J, dtype=np.int64)

    t = 0
    while t < horizon:
        n = min(CHUNK, horizon - t)
        A = arrivals.draw(arr_rng, n)
        U = pol_rng.random(n)
        for k in range(n):
            d = policy.act(q, U[k])
            s = d.sigma
            q = q - s + A[k]
            if record:
                Qs[t + 1] = q
                sig[t] = s
                sb[t] = d.sigma_bar.point
            served += s
            l1[t] = q.sum()
            t += 1
        arrived += A.sum(axis=0)
        if np.any(q < 0):
            raise NegativeQueue(f"negative queue at slot {t}")

    summary = _summarize(np.asarray(q0, dtype=np.int64), q, l1, kappa, served, arrived)
    summary["solves"] = policy.solves
    if record:
        return SimTrace(Qs, sig, sb, summary)
    return SimTrace(None, None, None, summary)


def _summarize(q0, qT, l1, kappa, served, arrived) -> dict:
    horizon = len(l1)
    if horizon == 0:
        norms = np.array([q0.sum()])
        quarters = [float(q0.sum())] * 4
    else:
        norms = l1
        quarters = [float(c.mean()) if len(c) else float("nan") for c in np.array_split(l1, 4)]
    return {
        "horizon": horizon,
        "q0": q0.tolist(),
        "q_final": qT.tolist(),
        "mean_l1": float(norms.mean()),
        "max_l1": int(max(int(q0.sum()), int(norms.max()))),
        "kappa": float(kappa),
        "frac_below_kappa": float(np.mean(norms <= kappa)),
        "quarter_mean_l1": quarters,
        "served": served.tolist(),
        "arrived": arrived.tolist(),
    }


def run(scenario, horizon: int | None = None, seed: int | None = None, record=True) -> SimTrace:
    """Simulate a :class:`~maxweight_ag.config.Scenario`."""
    return simulate(
        scenario.utility,
        scenario.schedules,
        scenario.arrivals,
        scenario.q0,
        scenario.horizon if horizon is None else horizon,
        scenario.seed if seed is None else seed,
        tol=scenario.tol,
        kappa=scenario.kappa,
        record=record,
    )


def _run_one(args):
    scenario, horizon, seed, record = args
    return run(scenario, horizon, seed, record)


def replicates(scenario, seeds, horizon=None, record=False, max_workers=1) -> list[SimTrace]:
    """Independent runs, returned in the order of ``seeds``."""
    jobs = [(scenario, horizon, s, record) for s in seeds]
    if max_workers <= 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=max_workers) as ex:
        return list(ex.map(_run_one, jobs))
