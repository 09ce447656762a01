"""Command line runner.

    maxweight-ag simulate --config cfg.yaml --out runs/sim [--seed N] [--quiet]

Subcommands: simulate, fluid, certificate, capacity, compare-scaled. Each
writes its files into ``--out``, embeds the resolved config in its JSON and
prints a one-line JSON summary. Failures print ``{"error": code, ...}`` and
exit with status 2.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import capacity, fluid, simulator
from .config import Scenario
from .errors import MaxWeightError

log = logging.getLogger("maxweight_ag")

MODES = ("simulate", "fluid", "certificate", "capacity", "compare-scaled")


def _write_json(path: Path, obj):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _fluid_q0(sc: Scenario):
    if sc.fluid_q0 is not None:
        q0 = np.asarray(sc.fluid_q0, dtype=float)
    elif sc.q0.sum() > 0:
        q0 = sc.q0 / sc.q0.sum()
    else:
        q0 = np.full(sc.schedules.dim, 1.0 / sc.schedules.dim)
    return q0


def run_simulate(sc: Scenario, out: Path) -> dict:
    trace = simulator.run(sc)
    trace.write_csv(out / "trace.csv")
    summary = dict(trace.summary, mode="simulate", config=sc.to_dict())
    _write_json(out / "summary.json", summary)
    return summary


def run_certificate(sc: Scenario, out: Path) -> dict:
    cert = fluid.default_certificate(sc.utility, sc.schedules, sc.arrivals.mean, sc.epsilon_fraction)
    summary = dict(cert.to_dict(), epsilon_fraction=sc.epsilon_fraction, mode="certificate", config=sc.to_dict())
    _write_json(out / "certificate.json", summary)
    return summary


def run_capacity(sc: Scenario, out: Path) -> dict:
    res = capacity.slack(sc.arrivals.mean, sc.schedules)
    summary = {
        "mode": "capacity",
        "slack": res.slack,
        "interior": res.interior,
        "witness": [{"vertex": list(v), "weight": p} for v, p in res.witness],
        "config": sc.to_dict(),
    }
    _write_json(out / "capacity.json", summary)
    return summary


def run_fluid(sc: Scenario, out: Path) -> dict:
    cert = fluid.default_certificate(sc.utility, sc.schedules, sc.arrivals.mean, sc.epsilon_fraction)
    t_end = sc.fluid_t_end if sc.fluid_t_end is not None else 1.5 * cert.T
    q0 = _fluid_q0(sc)
    traj = fluid.integrate(q0, sc.arrivals.mean, sc.utility, sc.schedules, sc.h, t_end, sc.tol, rho=cert.rho)
    J = sc.schedules.dim
    with open(out / "fluid.csv", "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["t"] + [f"q_{j + 1}" for j in range(J)] + ["L"])
        wr.writerows(traj.rows())
    summary = {
        "mode": "fluid",
        "q0": q0.tolist(),
        "t_end": t_end,
        "emptying_time": traj.emptying_time(),
        "absorbed_at": traj.absorbed_at,
        "certificate": cert.to_dict(),
        "config": sc.to_dict(),
    }
    _write_json(out / "summary.json", summary)
    return summary


def run_compare(sc: Scenario, out: Path) -> dict:
    cert = fluid.default_certificate(sc.utility, sc.schedules, sc.arrivals.mean, sc.epsilon_fraction)
    t_end = sc.compare_t_end if sc.compare_t_end is not None else 1.5 * cert.T
    shape = sc.compare_shape if sc.compare_shape is not None else _fluid_q0(sc)
    dists = fluid.compare_scaled(
        sc.utility, sc.schedules, sc.arrivals, shape, sc.c_list, t_end, sc.compare_seeds, sc.h, sc.tol
    )
    summary = {
        "mode": "compare-scaled",
        "t_end": t_end,
        "distances": {str(c): d for c, d in dists.items()},
        "medians": {str(c): float(np.median(d)) for c, d in dists.items()},
        "config": sc.to_dict(),
    }
    _write_json(out / "compare.json", summary)
    return summary


RUNNERS = {
    "simulate": run_simulate,
    "fluid": run_fluid,
    "certificate": run_certificate,
    "capacity": run_capacity,
    "compare-scaled": run_compare,
}


def run_experiment(mode: str, config_path, out_dir, seed=None) -> dict:
    sc = Scenario.load(config_path)
    if seed is not None:
        sc.seed = int(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return RUNNERS[mode](sc, out)


def _parser():
    p = argparse.ArgumentParser(prog="maxweight-ag", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        sp = sub.add_parser(mode)
        sp.add_argument("--config", required=True, type=Path)
        sp.add_argument("--out", default=Path("out"), type=Path)
        sp.add_argument("--seed", type=int, default=None, help="overrides the config seed")
        sp.add_argument("--quiet", action="store_true", help="suppress log output")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        summary = run_experiment(args.mode, args.config, args.out, args.seed)
    except (MaxWeightError, ValueError, OSError) as e:
        code = getattr(e, "code", type(e).__name__)
        print(json.dumps({"error": code, "message": str(e)}))
        return 2
    print(json.dumps(summary, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
