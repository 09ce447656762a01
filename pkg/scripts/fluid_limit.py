"""Scaled simulations against the fluid trajectory for growing c.

    python3 scripts/fluid_limit.py --out runs/fluid_limit
"""

import argparse
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from maxweight_ag.arrivals import ArrivalModel
from maxweight_ag.fluid import compare_scaled, default_certificate
from maxweight_ag.schedules import from_name
from maxweight_ag.utility import UtilityFamily


@dataclass
class FluidLimitConfig:
    schedules: str = "iq-switch:2"
    alpha: float = 1.0
    g: str = "log"
    rate: float = 0.3
    shape: list = field(default_factory=lambda: [0.4, 0.1, 0.2, 0.3])
    c_list: list = field(default_factory=lambda: [50, 100, 200, 400, 800, 1600])
    seeds: int = 5
    horizon_factor: float = 1.5  # compare on [0, factor * T]


def main(cfg: FluidLimitConfig, out: Path):
    S = from_name(cfg.schedules)
    u = UtilityFamily.make(cfg.alpha, cfg.g, S.dim)
    arr = ArrivalModel.bernoulli([cfg.rate] * S.dim)
    T = default_certificate(u, S, arr.mean).T
    d = compare_scaled(u, S, arr, cfg.shape, cfg.c_list, cfg.horizon_factor * T, range(cfg.seeds))
    med = {c: float(np.median(v)) for c, v in d.items()}
    for c, m in med.items():
        print(f"c={c:5d}  median sup-distance {m:.4f}  c*dist {c * m:.1f}")
    out.mkdir(parents=True, exist_ok=True)
    report = {"config": asdict(cfg), "T": T, "distances": {str(c): v for c, v in d.items()},
              "medians": {str(c): m for c, m in med.items()}}
    (out / "fluid_limit.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--g", default="log")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--out", type=Path, default=Path("runs/fluid_limit"))
    a = p.parse_args()
    main(FluidLimitConfig(g=a.g, alpha=a.alpha), a.out)
