"""Seed-averaged power / traffic / EE curves vs alpha and vs P_min for both case studies."""

import argparse
from pathlib import Path

from hapscs.runner import SweepSpec, run_sweep

ALL_BUT_ES = ["all_on", "sorting", "sorting_qos", "terrestrial_cs", "haps_cs", "haps_cs_noqos"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/figures")
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--cases", nargs="+", default=["A", "B"])
    args = ap.parse_args()
    for case in args.cases:
        spec = SweepSpec(
            alphas=[round(0.1 * i, 1) for i in range(1, 10)],
            p_mins_dbm=[-85.0, -80.0, -75.0, -70.0, -65.0, -60.0, -55.0],
            strategies=ALL_BUT_ES,
            seeds=list(range(args.seeds)),
            case_study=case,
            families=["alpha", "pmin"],
            workers=args.workers,
        )
        print(run_sweep(spec, Path(args.out) / f"case_{case}"))


if __name__ == "__main__":
    main()
