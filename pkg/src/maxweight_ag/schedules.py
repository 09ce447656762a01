"""Schedule sets, their validation, and queue truncation ``S ∧ Q``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, ScheduleSetError


@dataclass(frozen=True, eq=False)
class ScheduleSet:
    """Finite set of integer service vectors.

    Vertices are deduplicated and sorted lexicographically on construction;
    every "first" tie-break elsewhere in the package refers to this order.
    Construction does not validate, call :func:`validate` for that.
    """

    vertices: np.ndarray  # shape (m, dim), int64

    def __init__(self, vertices, dim=None):
        rows = [tuple(int(x) for x in v) for v in vertices]
        for v, raw in zip(rows, vertices):
            if not np.allclose(np.asarray(raw, dtype=float), v):
                raise TypeError(f"schedule {list(raw)} is not integer")
        if dim is None:
            if not rows:
                raise ValueError("empty schedule set needs an explicit dim")
            dim = len(rows[0])
        if any(len(v) != dim for v in rows):
            raise DimensionMismatch("schedules have inconsistent lengths")
        arr = np.array(sorted(set(rows)), dtype=np.int64).reshape(-1, dim)
        arr.setflags(write=False)
        object.__setattr__(self, "vertices", arr)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def __len__(self):
        return self.vertices.shape[0]

    def __iter__(self):
        return (tuple(int(x) for x in v) for v in self.vertices)

    def __contains__(self, v):
        return tuple(int(x) for x in v) in set(self)

    def __eq__(self, other):
        if not isinstance(other, ScheduleSet):
            return NotImplemented
        return self.vertices.shape == other.vertices.shape and bool(
            np.array_equal(self.vertices, other.vertices)
        )

    def __hash__(self):
        return hash(self.vertices.tobytes()) ^ self.dim

    def __repr__(self):
        return f"ScheduleSet({[list(v) for v in self]})"

    def to_list(self):
        return [list(v) for v in self]

    @property
    def max_service(self) -> np.ndarray:
        """Componentwise maximum over vertices."""
        return self.vertices.max(axis=0)


def problems(S: ScheduleSet) -> list[str]:
    """Return the codes of every violated model assumption (empty when ok)."""
    out = []
    V = S.vertices
    if not np.any(np.all(V == 0, axis=1)):
        out.append("missing-zero-vector")
    if np.any(V < 0):
        out.append("negative-component")
    if len(V) == 0 or np.linalg.matrix_rank(V.astype(float)) < S.dim:
        out.append("rank-deficient")
    return out


def validate(S: ScheduleSet) -> ScheduleSet:
    found = problems(S)
    if found:
        raise ScheduleSetError(found)
    return S


def truncate(S: ScheduleSet, Q) -> ScheduleSet:
    """``S ∧ Q``: componentwise minimum of every schedule with the queue vector."""
    Q = np.asarray(Q)
    if Q.shape != (S.dim,):
        raise DimensionMismatch(f"queue vector has shape {Q.shape}, expected ({S.dim},)")
    if np.all(Q >= S.max_service):
        return S
    out = ScheduleSet(np.minimum(S.vertices, Q.astype(np.int64)), dim=S.dim)
    if not np.any(np.all(out.vertices == 0, axis=1)):
        out = ScheduleSet(list(out) + [(0,) * S.dim], dim=S.dim)
    return out


# -- file format -------------------------------------------------------------


def load(path) -> ScheduleSet:
    """Read one vertex per line of space-separated integers; '#' lines skipped."""
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([int(x) for x in line.split()])
    return ScheduleSet(rows)


def dump(S: ScheduleSet, path, header=None):
    lines = [f"# {header}"] if header else []
    lines += [" ".join(str(x) for x in v) for v in S]
    Path(path).write_text("\n".join(lines) + "\n")


# -- named generators ----------------------------------------------------------


def single(n: int) -> ScheduleSet:
    """``n`` unit-service queues of which at most one is served per slot."""
    return ScheduleSet([(0,) * n] + [tuple(int(i == j) for i in range(n)) for j in range(n)])


def iq_switch(n: int) -> ScheduleSet:
    """n×n input-queued switch, virtual output queue (i, j) at index ``i*n + j``.

    The schedule set is every partial matching, i.e. every sub-schedule of a
    permutation, so the polytope is full dimensional.
    """
    rows = set()
    for perm in itertools.permutations(range(n)):
        for keep in itertools.product((0, 1), repeat=n):
            v = [0] * (n * n)
            for i, (j, k) in enumerate(zip(perm, keep)):
                if k:
                    v[i * n + j] = 1
            rows.add(tuple(v))
    return ScheduleSet(sorted(rows))


def permutations(n: int) -> ScheduleSet:
    """Zero plus the n! vectorized permutation matrices (not full dimensional for n > 1)."""
    rows = [(0,) * (n * n)]
    for perm in itertools.permutations(range(n)):
        v = [0] * (n * n)
        for i, j in enumerate(perm):
            v[i * n + j] = 1
        rows.append(tuple(v))
    return ScheduleSet(rows)


GENERATORS = {"single": single, "iq-switch": iq_switch, "permutations": permutations}


def from_name(name: str) -> ScheduleSet:
    """Resolve ``"iq-switch:3"``-style names."""
    kind, _, arg = name.partition(":")
    if kind not in GENERATORS or not arg.isdigit():
        raise ValueError(f"unknown schedule generator {name!r}")
    return GENERATORS[kind](int(arg))
