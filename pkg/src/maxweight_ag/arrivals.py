"""I.i.d. arrival processes.

All models have finite second moments, which is what the fluid-limit
argument needs (uniform integrability of the scaled queue).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KINDS = ("bernoulli", "poisson", "deterministic", "batch")


@dataclass(frozen=True)
class ArrivalModel:
    """``rate`` is p (bernoulli), lambda (poisson) or the per-slot count
    (deterministic). ``batch`` draws one of ``vectors`` with ``probs``.
    """

    kind: str
    rate: tuple = ()
    vectors: tuple = ()
    probs: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown arrival kind {self.kind!r}")
        if self.kind == "batch":
            v = np.asarray(self.vectors)
            p = np.asarray(self.probs, dtype=float)
            if v.ndim != 2 or len(v) != len(p) or np.any(v < 0) or np.any(p < 0):
                raise ValueError("batch arrivals need matching nonnegative vectors and probs")
            if abs(p.sum() - 1) > 1e-9:
                raise ValueError("batch probabilities must sum to one")
        else:
            r = np.asarray(self.rate, dtype=float)
            if r.ndim != 1 or len(r) == 0:
                raise ValueError("rate must be a nonempty vector")
            if self.kind == "bernoulli" and np.any((r <= 0) | (r > 1)):
                raise ValueError("bernoulli rates must lie in (0, 1]")
            if self.kind == "deterministic" and np.any(r != np.round(r)):
                raise ValueError("deterministic arrivals must be integers")
        if np.any(self.mean <= 0):
            raise ValueError("every queue needs a positive mean arrival rate")

    @classmethod
    def bernoulli(cls, p):
        return cls("bernoulli", tuple(float(x) for x in p))

    @classmethod
    def poisson(cls, lam):
        return cls("poisson", tuple(float(x) for x in lam))

    @classmethod
    def deterministic(cls, d):
        return cls("deterministic", tuple(int(x) for x in d))

    @classmethod
    def batch(cls, vectors, probs):
        return cls(
            "batch",
            vectors=tuple(tuple(int(x) for x in v) for v in vectors),
            probs=tuple(float(p) for p in probs),
        )

    @property
    def dim(self) -> int:
        return len(self.vectors[0]) if self.kind == "batch" else len(self.rate)

    @property
    def mean(self) -> np.ndarray:
        if self.kind == "batch":
            return np.asarray(self.probs) @ np.asarray(self.vectors, dtype=float)
        return np.asarray(self.rate, dtype=float)

    @property
    def second_moment(self) -> np.ndarray:
        """Per-queue ``E[a_j^2]``."""
        r = np.asarray(self.rate, dtype=float)
        if self.kind == "bernoulli":
            return r
        if self.kind == "poisson":
            return r + r**2
        if self.kind == "deterministic":
            return r**2
        return np.asarray(self.probs) @ np.asarray(self.vectors, dtype=float) ** 2

    @property
    def K_var(self) -> float:
        return float(self.second_moment.max())

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """``n`` i.i.d. arrival vectors, shape (n, dim), int64."""
        if self.kind == "bernoulli":
            return (rng.random((n, self.dim)) < np.asarray(self.rate)).astype(np.int64)
        if self.kind == "poisson":
            return rng.poisson(self.rate, size=(n, self.dim)).astype(np.int64)
        if self.kind == "deterministic":
            return np.tile(np.asarray(self.rate, dtype=np.int64), (n, 1))
        idx = rng.choice(len(self.probs), size=n, p=np.asarray(self.probs))
        return np.asarray(self.vectors, dtype=np.int64)[idx]

    def spec(self) -> dict:
        if self.kind == "batch":
            return {"kind": "batch", "vectors": [list(v) for v in self.vectors], "probs": list(self.probs)}
        return {"kind": self.kind, "rate": list(self.rate)}

    @classmethod
    def from_spec(cls, spec: dict, dim: int | None = None) -> "ArrivalModel":
        kind = spec["kind"]
        if kind == "batch":
            return cls.batch(spec["vectors"], spec["probs"])
        rate = spec["rate"]
        if np.isscalar(rate):
            if dim is None:
                raise ValueError("scalar rate needs the number of queues")
            rate = [rate] * dim
        return getattr(cls, kind)(rate)
