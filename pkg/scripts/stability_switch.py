"""Long runs of the 2x2 input-queued switch under several MaxWeight-(alpha, g) policies.

    python3 scripts/stability_switch.py --load 0.9 --horizon 1000000 --out runs/stability
"""

import argparse
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from maxweight_ag.arrivals import ArrivalModel
from maxweight_ag.capacity import slack
from maxweight_ag.schedules import iq_switch
from maxweight_ag.simulator import simulate
from maxweight_ag.utility import UtilityFamily


@dataclass
class StabilityConfig:
    n: int = 2
    load: float = 0.9
    horizon: int = 1_000_000
    seed: int = 0
    policies: list = field(default_factory=lambda: [(1.0, "linear"), (2.0, "linear"), (1.0, "log")])


def main(cfg: StabilityConfig, out: Path):
    S = iq_switch(cfg.n)
    J = S.dim
    arr = ArrivalModel.bernoulli([cfg.load / cfg.n] * J)  # each port carries `load`
    report = {"config": asdict(cfg), "capacity_slack": slack(arr.mean, S).slack, "runs": []}
    for alpha, g in cfg.policies:
        s = simulate(UtilityFamily.make(alpha, g, J), S, arr, [0] * J, cfg.horizon, cfg.seed, record=False).summary
        report["runs"].append({"alpha": alpha, "g": g, **s})
        print(f"alpha={alpha} g={g}: quarter means {[round(x, 2) for x in s['quarter_mean_l1']]}")
    out.mkdir(parents=True, exist_ok=True)
    (out / "stability.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--load", type=float, default=0.9)
    p.add_argument("--horizon", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("runs/stability"))
    a = p.parse_args()
    main(StabilityConfig(load=a.load, horizon=a.horizon, seed=a.seed), a.out)
