"""The (alpha, g) family that defines the MaxWeight-(alpha, g) objective.

Each queue carries a concave, strictly increasing service utility ``g_j``;
the policy maximizes ``sum_j g_j(s_j) * Q_j**alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch

LINEAR, LOG, POWER, SQRT = 0, 1, 2, 3
_NAMES = {LINEAR: "linear", LOG: "log", POWER: "power", SQRT: "sqrt"}


@dataclass(frozen=True)
class G:
    """A built-in service utility: ``linear``, ``log``, ``sqrt`` or ``power:<beta>``.

    ``power:beta`` is ``s**(1-beta) / (1-beta)``; with ``alpha == beta`` the
    policy is the alpha-fair one.
    """

    kind: int
    beta: float = 0.0

    def __post_init__(self):
        if self.kind == POWER and (self.beta <= 0 or self.beta == 1):
            raise ValueError("power utility needs beta > 0 and beta != 1 (use log)")

    @classmethod
    def parse(cls, name) -> "G":
        if isinstance(name, G):
            return name
        name = str(name).strip().lower()
        if name.startswith("power:"):
            return cls(POWER, float(name.split(":", 1)[1]))
        for kind, label in _NAMES.items():
            if name == label and kind != POWER:
                return cls(kind)
        raise ValueError(f"unknown utility {name!r}")

    @property
    def name(self) -> str:
        if self.kind == POWER:
            return f"power:{self.beta:g}"
        return _NAMES[self.kind]

    @property
    def minus_inf_at_zero(self) -> bool:
        return self.kind == LOG or (self.kind == POWER and self.beta > 1)

    def evaluate(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind == LINEAR:
            return s.copy()
        if self.kind == SQRT:
            return np.sqrt(s)
        with np.errstate(divide="ignore"):
            if self.kind == LOG:
                return np.log(s)
            return np.power(s, 1.0 - self.beta) / (1.0 - self.beta)

    def derivative(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind == LINEAR:
            return np.ones_like(s)
        with np.errstate(divide="ignore"):
            if self.kind == LOG:
                return 1.0 / s
            if self.kind == SQRT:
                return 0.5 / np.sqrt(s)
            return np.power(s, -self.beta)


@dataclass(frozen=True)
class UtilityFamily:
    alpha: float
    g: tuple  # tuple[G, ...], one per queue

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")

    @classmethod
    def make(cls, alpha, g, dim) -> "UtilityFamily":
        """Build from a name (applied to all queues) or a per-queue list of names."""
        if isinstance(g, (list, tuple)):
            if len(g) != dim:
                raise DimensionMismatch(f"{len(g)} utilities given for {dim} queues")
            gs = tuple(G.parse(x) for x in g)
        else:
            gs = (G.parse(g),) * dim
        return cls(float(alpha), gs)

    @property
    def dim(self) -> int:
        return len(self.g)

    @property
    def kinds(self) -> np.ndarray:
        return np.array([x.kind for x in self.g], dtype=np.int64)

    @property
    def betas(self) -> np.ndarray:
        return np.array([x.beta for x in self.g], dtype=float)

    def spec(self):
        names = [x.name for x in self.g]
        return {"alpha": self.alpha, "g": names[0] if len(set(names)) == 1 else names}

    def evaluate(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.array([gj.evaluate(sj) for gj, sj in zip(self.g, s)])

    def derivative(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.array([gj.derivative(sj) for gj, sj in zip(self.g, s)])


def weight(u: UtilityFamily, Q) -> np.ndarray:
    """``Q_j ** alpha`` with ``0 ** alpha == 0``."""
    Q = np.asarray(Q, dtype=float)
    if np.any(Q < 0):
        raise ValueError("queue lengths must be nonnegative")
    return np.power(Q, u.alpha)


def objective(u: UtilityFamily, Q, s) -> float:
    """``sum_j g_j(s_j) * Q_j**alpha``; terms with ``Q_j == 0`` count as exactly 0.

    Returns ``-inf`` when a queue with positive weight has ``g_j(s_j) = -inf``.
    """
    return weighted_objective(u, weight(u, Q), s)


def weighted_objective(u: UtilityFamily, w, s) -> float:
    w = np.asarray(w, dtype=float)
    s = np.asarray(s, dtype=float)
    if w.shape != (u.dim,) or s.shape != (u.dim,):
        raise DimensionMismatch("weights, point and utility family differ in length")
    live = w > 0
    if not live.any():
        return 0.0
    return float(np.sum(w[live] * u.evaluate(s)[live]))


def gradient(u: UtilityFamily, w, s) -> np.ndarray:
    """Gradient of the weighted objective in ``s`` (zero where ``w_j == 0``)."""
    w = np.asarray(w, dtype=float)
    d = u.derivative(s)
    return np.where(w > 0, w * np.where(w > 0, d, 0.0), 0.0)
