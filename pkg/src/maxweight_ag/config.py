"""Scenario configuration: YAML (or JSON) in, resolved dataclass out.

Example::

    schedules: iq-switch:2          # or [[0,0],[1,0],[0,1]] or {file: path}
    utility: {alpha: 1, g: log}     # g may be a per-queue list
    arrivals: {kind: bernoulli, rate: 0.225}
    initial: [0, 0, 0, 0]
    horizon: 100000
    seed: 0
    solver: {tol: 1.0e-8}
    fluid: {h: 0.001, t_end: 10, q0: [0.5, 0.5, 0, 0]}
    certificate: {epsilon_fraction: 0.5}
    compare: {c_list: [50, 200, 800], seeds: [0, 1, 2, 3, 4]}

``Scenario.to_dict`` gives the fully resolved form (explicit vertices,
defaults filled in); feeding it back to ``Scenario.from_dict`` reproduces
the same scenario.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import schedules as sched
from .arrivals import ArrivalModel
from .errors import ConfigError, DimensionMismatch
from .simulator import default_kappa
from .solver import DEFAULT_TOL
from .utility import UtilityFamily

_KNOWN = {
    "schedules", "utility", "arrivals", "initial", "horizon", "seed", "solver",
    "kappa", "fluid", "certificate", "compare", "mode",
}


def _resolve_schedules(src, base: Path) -> sched.ScheduleSet:
    if isinstance(src, str):
        return sched.from_name(src)
    if isinstance(src, dict):
        if "vertices" in src:
            return sched.ScheduleSet(src["vertices"])
        if "file" in src:
            path = Path(src["file"])
            return sched.load(path if path.is_absolute() else base / path)
        if "name" in src:
            return sched.from_name(src["name"])
    if isinstance(src, list):
        return sched.ScheduleSet(src)
    raise ConfigError(f"cannot resolve schedule set from {src!r}")


@dataclass
class Scenario:
    schedules: sched.ScheduleSet
    utility: UtilityFamily
    arrivals: ArrivalModel
    q0: np.ndarray
    horizon: int = 1000
    seed: int = 0
    tol: float = DEFAULT_TOL
    kappa: float | None = None
    h: float = 1e-3
    fluid_t_end: float | None = None
    fluid_q0: list | None = None
    epsilon_fraction: float = 0.5
    c_list: list = field(default_factory=lambda: [50, 200, 800])
    compare_seeds: list = field(default_factory=lambda: [0, 1, 2, 3, 4])
    compare_shape: list | None = None
    compare_t_end: float | None = None
    source: object = None  # schedule source as written, kept for provenance

    def __post_init__(self):
        J = self.schedules.dim
        if self.utility.dim != J or self.arrivals.dim != J or len(self.q0) != J:
            raise DimensionMismatch("schedules, utility, arrivals and initial queue disagree on |J|")
        sched.validate(self.schedules)
        if self.kappa is None:
            self.kappa = default_kappa(self.arrivals.mean)

    @classmethod
    def from_dict(cls, d: dict, base: Path | str = ".") -> "Scenario":
        unknown = set(d) - _KNOWN
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            src = d["schedules"]
            S = _resolve_schedules(src, Path(base))
            J = S.dim
            ut = d.get("utility", {})
            u = UtilityFamily.make(ut.get("alpha", 1.0), ut.get("g", "linear"), J)
            arr = ArrivalModel.from_spec(d["arrivals"], J)
        except KeyError as e:
            raise ConfigError(f"missing config key {e}") from None
        solver = d.get("solver", {}) or {}
        fl = d.get("fluid", {}) or {}
        cert = d.get("certificate", {}) or {}
        cmp_ = d.get("compare", {}) or {}
        seeds = cmp_.get("seeds", [0, 1, 2, 3, 4])
        if isinstance(seeds, int):
            seeds = list(range(seeds))
        if isinstance(src, dict) and "vertices" in src:
            src = src.get("source", src["vertices"])
        return cls(
            schedules=S,
            utility=u,
            arrivals=arr,
            q0=np.asarray(d.get("initial", [0] * J), dtype=np.int64),
            horizon=int(d.get("horizon", 1000)),
            seed=int(d.get("seed", 0)),
            tol=float(solver.get("tol", DEFAULT_TOL)),
            kappa=None if d.get("kappa") is None else float(d["kappa"]),
            h=float(fl.get("h", 1e-3)),
            fluid_t_end=None if fl.get("t_end") is None else float(fl["t_end"]),
            fluid_q0=fl.get("q0"),
            epsilon_fraction=float(cert.get("epsilon_fraction", 0.5)),
            c_list=[int(c) for c in cmp_.get("c_list", [50, 200, 800])],
            compare_seeds=[int(s) for s in seeds],
            compare_shape=cmp_.get("shape"),
            compare_t_end=None if cmp_.get("t_end") is None else float(cmp_["t_end"]),
            source=src,
        )

    @classmethod
    def load(cls, path) -> "Scenario":
        path = Path(path)
        data = yaml.safe_load(path.read_text())
        if not isinstance(data, dict):
            raise ConfigError(f"{path} does not hold a mapping")
        return cls.from_dict(data, base=path.parent)

    def to_dict(self) -> dict:
        return {
            "schedules": {"source": self.source, "vertices": self.schedules.to_list()},
            "utility": self.utility.spec(),
            "arrivals": self.arrivals.spec(),
            "initial": [int(x) for x in self.q0],
            "horizon": self.horizon,
            "seed": self.seed,
            "solver": {"tol": self.tol},
            "kappa": self.kappa,
            "fluid": {"h": self.h, "t_end": self.fluid_t_end, "q0": self.fluid_q0},
            "certificate": {"epsilon_fraction": self.epsilon_fraction},
            "compare": {
                "c_list": list(self.c_list),
                "seeds": list(self.compare_seeds),
                "shape": self.compare_shape,
                "t_end": self.compare_t_end,
            },
        }
