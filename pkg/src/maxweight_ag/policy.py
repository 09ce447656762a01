"""Per-slot MaxWeight-(alpha, g) decision: truncate, solve, randomize."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDecomposition
from .schedules import ScheduleSet, truncate
from .solver import DEFAULT_MAX_ITER, DEFAULT_TOL, FractionalSchedule, maximize
from .utility import UtilityFamily, weight

PRUNE_BELOW = 1e-12


def decide(u: UtilityFamily, S: ScheduleSet, Q, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Fractional optimum of the policy objective over ``<S ∧ Q>``."""
    Q = np.asarray(Q)
    if np.any(Q < 0):
        raise ValueError("queue lengths must be nonnegative")
    sbar, _ = maximize(u, weight(u, Q), truncate(S, Q), tol=tol, max_iter=max_iter)
    return sbar


def _cdf(d: FractionalSchedule):
    p = np.asarray(d.weights, dtype=float)
    if p.ndim != 1 or len(p) != len(d.vertices) or np.any(p < 0) or abs(p.sum() - 1) > 1e-9:
        raise InvalidDecomposition("support weights must be nonnegative and sum to one")
    keep = p >= PRUNE_BELOW
    p = p[keep] / p[keep].sum()
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    return np.asarray(d.vertices)[keep], cdf


def sample(d: FractionalSchedule, rng: np.random.Generator) -> np.ndarray:
    """Draw a support vertex with probability equal to its weight (one uniform)."""
    verts, cdf = _cdf(d)
    return verts[int(np.searchsorted(cdf, rng.random(), side="right"))].copy()


def sample_many(d: FractionalSchedule, rng: np.random.Generator, n: int) -> np.ndarray:
    verts, cdf = _cdf(d)
    return verts[np.searchsorted(cdf, rng.random(n), side="right")]


@dataclass
class PolicyDecision:
    sigma_bar: FractionalSchedule
    sigma: np.ndarray


class Policy:
    """MaxWeight-(alpha, g) with decisions memoized on the queue vector.

    ``decide`` is a pure function of ``Q``, so the cache changes nothing but
    speed. ``cache_size`` bounds the number of remembered states.
    """

    def __init__(self, u, S, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, cache_size=200_000):
        self.u, self.S, self.tol, self.max_iter = u, S, tol, max_iter
        self.cache_size = cache_size
        self._cache = {}
        self.solves = 0

    def _lookup(self, Q):
        key = tuple(int(x) for x in Q)
        hit = self._cache.get(key)
        if hit is None:
            sbar = decide(self.u, self.S, Q, self.tol, self.max_iter)
            verts, cdf = _cdf(sbar)
            hit = (sbar, verts, cdf)
            self.solves += 1
            if len(self._cache) >= self.cache_size:
                self._cache.clear()
            self._cache[key] = hit
        return hit

    def decide(self, Q) -> FractionalSchedule:
        return self._lookup(Q)[0]

    def act(self, Q, uniform: float) -> PolicyDecision:
        """Decision for state ``Q`` using the supplied uniform variate."""
        sbar, verts, cdf = self._lookup(Q)
        return PolicyDecision(sbar, verts[int(np.searchsorted(cdf, uniform, side="right"))])
