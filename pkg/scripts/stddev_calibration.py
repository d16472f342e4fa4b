"""Sweep the hotspot standard deviation and report HAPS-CS / NoQoS power as a share of All-ON."""

import argparse
from dataclasses import replace

import numpy as np

from hapscs.scenario import TrafficComponent, case_study_preset, with_overrides
from hapscs.state import build_state
from hapscs.strategies import run_strategy


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--stddevs", type=float, nargs="+", default=[500.0, 550.0, 600.0, 700.0, 800.0, 900.0])
    ap.add_argument("--alphas", type=float, nargs="+", default=[0.1, 0.5, 0.9])
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()
    base = case_study_preset("A")
    print("stddev_m,alpha,haps_cs_share,noqos_share")
    for sd in args.stddevs:
        comp = TrafficComponent(base.traffic.components[0].mean, sd)
        cfg = replace(base, traffic=replace(base.traffic, components=(comp,)))
        for a in args.alphas:
            ratios = []
            for seed in range(args.seeds):
                st = build_state(with_overrides(cfg, alpha=a, rng_seed=seed))
                ref = run_strategy("all_on", st).objective_w
                ratios.append((run_strategy("haps_cs", st).objective_w / ref,
                               run_strategy("haps_cs_noqos", st).objective_w / ref))
            q, nq = np.mean(ratios, axis=0)
            print(f"{sd},{a},{q:.4f},{nq:.4f}")


if __name__ == "__main__":
    main()
