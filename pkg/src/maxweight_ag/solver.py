"""Maximize ``sum_j w_j g_j(s_j)`` over the convex hull of a schedule set.

:func:`maximize` is an away-step conditional gradient method that keeps an
explicit convex decomposition of its iterate over the vertices, which the
policy needs for randomized rounding. :func:`brute_force_max` is an
independent grid-enumeration oracle for tests.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, InfeasibleLogError, TooManyVertices
from .schedules import ScheduleSet
from .utility import UtilityFamily, weighted_objective

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 10_000


@dataclass(frozen=True, eq=False)
class FractionalSchedule:
    """A point of the schedule polytope with its convex decomposition.

    ``vertices[i]`` carries weight ``weights[i] > 0``; rows follow the
    lexicographic order of the schedule set they came from.
    """

    point: np.ndarray
    vertices: np.ndarray
    weights: np.ndarray

    @property
    def support(self):
        return [(tuple(int(x) for x in v), float(p)) for v, p in zip(self.vertices, self.weights)]

    def check(self, S: ScheduleSet | None = None, atol=1e-9):
        """Raise ``AssertionError`` if the decomposition is unsound."""
        assert np.all(self.weights > 0), "nonpositive support weight"
        assert abs(self.weights.sum() - 1.0) <= atol, "weights do not sum to one"
        recon = self.weights @ self.vertices
        assert np.allclose(recon, self.point, rtol=0, atol=atol), "point != sum weight*vertex"
        if S is not None:
            members = set(S)
            assert all(v in members for v, _ in self.support), "support vertex outside S"

    @classmethod
    def at_vertex(cls, v):
        v = np.asarray(v, dtype=np.int64).reshape(1, -1)
        return cls(v[0].astype(float), v, np.ones(1))


@dataclass
class SolverReport:
    iterations: int
    duality_gap: float
    objective_value: float
    converged: bool = True
    dropped: tuple = ()  # weighted coordinates no schedule can serve
    history: np.ndarray = field(default=None, repr=False)


def _check_inputs(u, w, S):
    w = np.asarray(w, dtype=float)
    if w.shape != (S.dim,) or u.dim != S.dim:
        raise DimensionMismatch(
            f"weights {w.shape}, utility dim {u.dim}, schedule dim {S.dim} disagree"
        )
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and nonnegative")
    return w


def _zero_schedule(S):
    zero = np.zeros(S.dim, dtype=np.int64)
    return FractionalSchedule.at_vertex(zero)


def maximize(
    u: UtilityFamily,
    weights,
    S: ScheduleSet,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    strict: bool = False,
):
    """Away-step conditional gradient over ``<S>``.

    Stops once the duality gap is at most ``tol * (1 + |objective|)``. Only
    coordinates with positive weight are determined uniquely by the problem.

    Weighted coordinates that no vertex can serve contribute a constant; when
    that constant is ``-inf`` (log-type ``g``) the problem is infeasible and
    those coordinates are dropped from the objective and listed in
    ``report.dropped``, or :class:`InfeasibleLogError` is raised if ``strict``.

    Returns ``(FractionalSchedule, SolverReport)``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    w = _check_inputs(u, weights, S)
    V = S.vertices.astype(float)

    if not np.any(w > 0):
        return _zero_schedule(S), SolverReport(0, 0.0, 0.0, history=np.zeros(1))

    unservable = (w > 0) & (V.max(axis=0) <= 0)
    dropped = ()
    constant = 0.0
    if unservable.any():
        bad = tuple(int(j) for j in np.flatnonzero(unservable) if u.g[j].minus_inf_at_zero)
        if bad:
            if strict:
                raise InfeasibleLogError(f"queues {bad} have positive weight but no schedule serves them")
            log.warning("dropping unservable log-type queues %s from the objective", bad)
            dropped = bad
        else:
            constant = float(sum(w[j] * u.g[j].evaluate(0.0) for j in np.flatnonzero(unservable)))
        w = np.where(unservable, 0.0, w)
        if not np.any(w > 0):
            return _zero_schedule(S), SolverReport(0, 0.0, constant, dropped=dropped, history=np.zeros(1))

    lam = np.full(len(V), 1.0 / len(V))
    history = np.empty(max_iter + 1)
    status, iters, gap, f = _kernels.away_step_fw(
        V, lam, w, u.kinds, u.betas, float(tol), int(max_iter), history
    )
    converged = status == _kernels.STATUS_CONVERGED
    if not converged:
        why = "max-iter-exceeded" if status == _kernels.STATUS_MAX_ITER else "line search stalled"
        log.debug("solver stopped early (%s): gap %.3g after %d iterations", why, gap, iters)

    keep = lam > 0
    weights_ = lam[keep] / lam[keep].sum()
    verts = S.vertices[keep]
    point = weights_ @ verts
    report = SolverReport(
        iterations=int(iters),
        duality_gap=float(max(gap, 0.0)),
        objective_value=float(f) + constant,
        converged=converged,
        dropped=dropped,
        history=history[: iters + 1].copy(),
    )
    return FractionalSchedule(point, verts, weights_), report


# -- brute-force oracle -----------------------------------------------------------

MAX_ORACLE_VERTICES = 6


@lru_cache(maxsize=16)
def _compositions(k: int, grid: int) -> np.ndarray:
    """All nonnegative integer k-vectors summing to ``grid``, lexicographic."""
    if k == 1:
        return np.array([[grid]], dtype=np.int32)
    out = []
    for bars in itertools.combinations(range(grid + k - 1), k - 1):
        prev, row = -1, []
        for b in bars:
            row.append(b - prev - 1)
            prev = b
        row.append(grid + k - 2 - prev)
        out.append(row)
    return np.array(out, dtype=np.int32)


def brute_force_max(u: UtilityFamily, weights, S: ScheduleSet, grid: int = 200) -> np.ndarray:
    """Best point ``sum_i lam_i v_i`` with ``lam`` on the simplex grid of step 1/grid.

    The objective is nondecreasing in ``s`` (every ``g_j`` increases, weights
    are nonnegative), so mass on a vertex dominated componentwise by another
    vertex can be moved there without loss; the grid is enumerated over the
    non-dominated vertices only. Ties go to the first grid point found.
    """
    w = _check_inputs(u, weights, S)
    if len(S) > MAX_ORACLE_VERTICES:
        raise TooManyVertices(f"{len(S)} vertices, oracle supports at most {MAX_ORACLE_VERTICES}")
    if not np.any(w > 0):
        return np.zeros(S.dim)
    V = S.vertices
    keep = []
    for i, v in enumerate(V):
        dominated = any(
            np.all(V[k] >= v) and (np.any(V[k] > v) or k < i) for k in range(len(V)) if k != i
        )
        if not dominated:
            keep.append(i)
    Vk = V[keep].astype(float)
    lam = _compositions(len(keep), grid)
    best_val, best_pt = -np.inf, None
    for start in range(0, len(lam), 200_000):
        pts = lam[start : start + 200_000] @ Vk / grid
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.zeros(len(pts))
            for j in np.flatnonzero(w > 0):
                vals += w[j] * u.g[j].evaluate(pts[:, j])
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val, best_pt = vals[i], pts[i]
    if best_pt is None:
        return Vk[0] * 0.0
    return best_pt
