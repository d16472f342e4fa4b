"""Per-SBS status maps (active / to_mbs / to_haps) for a few P_min values."""

import argparse
import csv
from pathlib import Path

from hapscs.runner import SNAPSHOT_COLUMNS, snapshot
from hapscs.scenario import case_study_preset, with_overrides


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/snapshots")
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--pmins", type=float, nargs="+", default=[-80.0, -60.0])
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    base = with_overrides(case_study_preset("A"), alpha=args.alpha, rng_seed=args.seed)
    jobs = [("haps_cs", p) for p in args.pmins] + [("haps_cs_noqos", args.pmins[0]), ("terrestrial_cs", args.pmins[0])]
    for strategy, pmin in jobs:
        rows = snapshot(with_overrides(base, p_min_dbm=pmin), strategy)
        path = out / f"{strategy}_pmin{int(pmin)}.csv"
        with path.open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=SNAPSHOT_COLUMNS)
            w.writeheader()
            w.writerows(rows)
        off = sum(r["status"] != "active" for r in rows)
        print(f"{path}: {off} SBSs off")


if __name__ == "__main__":
    main()
