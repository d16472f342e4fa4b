"""Power vs network size and solver runtime vs s (exhaustive search up to its cap)."""

import argparse

from hapscs.runner import SweepSpec, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/size")
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 25, 36, 49])
    ap.add_argument("--alphas", type=float, nargs="+", default=[0.1, 0.3, 0.5, 0.7, 0.9])
    args = ap.parse_args()
    spec = SweepSpec(
        alphas=args.alphas,
        sbs_counts=args.sizes,
        strategies=["all_on", "sorting", "terrestrial_cs", "haps_cs", "haps_cs_noqos", "exhaustive"],
        seeds=list(range(args.seeds)),
        families=["size"],
    )
    print(run_sweep(spec, args.out))


if __name__ == "__main__":
    main()
