"""Capacity slack: the largest ``eps`` with ``(1 + eps) * abar`` in ``<S>``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import DimensionMismatch
from .schedules import ScheduleSet


@dataclass
class CapacityResult:
    slack: float
    weights: np.ndarray  # convex weights over S.vertices, in vertex order
    vertices: np.ndarray

    @property
    def interior(self) -> bool:
        return self.slack > 0

    @property
    def witness(self):
        return [(tuple(int(x) for x in v), float(p)) for v, p in zip(self.vertices, self.weights) if p > 0]


def slack(abar, S: ScheduleSet) -> CapacityResult:
    """Solve ``max eps`` s.t. ``lam >= 0, sum(lam) = 1, V^T lam = (1 + eps) abar``.

    One LP in (lam, eps). ``eps`` may come out negative when ``abar`` lies
    outside the capacity region; ``eps = -1`` is always feasible via the zero
    schedule.
    """
    abar = np.asarray(abar, dtype=float)
    if abar.shape != (S.dim,):
        raise DimensionMismatch(f"arrival rate has shape {abar.shape}, expected ({S.dim},)")
    if np.any(abar <= 0):
        raise ValueError("arrival rates must be positive")
    V = S.vertices.astype(float)
    m, J = V.shape
    c = np.zeros(m + 1)
    c[-1] = -1.0
    A_eq = np.zeros((J + 1, m + 1))
    A_eq[:J, :m] = V.T
    A_eq[:J, m] = -abar
    A_eq[J, :m] = 1.0
    b_eq = np.concatenate([abar, [1.0]])
    bounds = [(0, None)] * m + [(None, None)]
    res = linprog(
        c, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.status != 0:
        raise RuntimeError(f"capacity LP failed: {res.message}")
    lam = np.clip(res.x[:m], 0.0, None)
    lam /= lam.sum()
    eps = float(res.x[m])
    return CapacityResult(eps, lam, S.vertices.copy())
