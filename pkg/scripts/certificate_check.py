"""Compare the certificate time T with observed fluid emptying times.

Samples random interior arrival rates and initial states, integrates the
fluid model and reports how often the trajectory is still nonempty at T.
The bound degrades when arrival rates are small relative to the capacity
region, since the drift it assumes is not scaled by the rates.

    python3 scripts/certificate_check.py --n 30 --out runs/certificate
"""

import argparse
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from maxweight_ag.fluid import default_certificate, integrate
from maxweight_ag.schedules import ScheduleSet, iq_switch
from maxweight_ag.utility import UtilityFamily


@dataclass
class CertificateCheckConfig:
    n: int = 30
    seed: int = 0
    h: float = 1e-3
    low: float = 0.3  # abar = U(low, high) times a Dirichlet mix of vertices
    high: float = 0.9


def main(cfg: CertificateCheckConfig, out: Path):
    rng = np.random.default_rng(cfg.seed)
    sets = [ScheduleSet([(0, 0), (1, 0), (0, 1)]), iq_switch(2), ScheduleSet([(0, 0), (2, 0), (0, 1), (1, 1)])]
    rows = []
    for k in range(cfg.n):
        S = sets[k % len(sets)]
        g, alpha = ["linear", "log", "power:2"][k % 3], [0.5, 1, 2][(k // 3) % 3]
        abar = rng.uniform(cfg.low, cfg.high) * (rng.dirichlet(np.ones(len(S))) @ S.vertices)
        q0 = rng.dirichlet(np.ones(S.dim))
        u = UtilityFamily.make(alpha, g, S.dim)
        cert = default_certificate(u, S, abar)
        tr = integrate(q0, abar, u, S, h=cfg.h, t_end=max(1.1 * cert.T, 20.0), rho=cert.rho)
        empty = tr.emptying_time()
        rows.append({"g": g, "alpha": alpha, "abar": abar.tolist(), "T": cert.T, "emptying_time": empty,
                     "within_T": empty is not None and empty <= cert.T})
        print(f"#{k:2d} {g:8s} a={alpha:<3} |abar|={abar.sum():.3f} T={cert.T:8.3f} empty={empty}")
    print(f"{sum(r['within_T'] for r in rows)}/{len(rows)} emptied by T")
    out.mkdir(parents=True, exist_ok=True)
    (out / "certificate_check.json").write_text(
        json.dumps({"config": asdict(cfg), "runs": rows}, indent=2, sort_keys=True) + "\n"
    )


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("runs/certificate"))
    a = p.parse_args()
    main(CertificateCheckConfig(n=a.n, seed=a.seed), a.out)
