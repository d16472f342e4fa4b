"""Command-line entry point: ``hapscs run | snapshot | linkbudget``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, replace

from .channel import haps_link, mbs_link, step_rng
from .runner import SNAPSHOT_COLUMNS, SweepSpec, run_sweep, snapshot
from .scenario import case_study_preset, load_config, with_overrides
from .strategies import STRATEGY_IDS, parse_strategy


def _base_config(args):
    if args.scenario:
        cfg = load_config(args.scenario)
        if args.case and args.case != cfg.case_study:
            raise ValueError(f"--case {args.case} conflicts with case_study={cfg.case_study!r} in {args.scenario}")
        return cfg
    return case_study_preset(args.case or "A")


def cmd_run(args) -> dict:
    base = _base_config(args)
    if args.steps is not None:
        base = replace(base, num_steps=args.steps)
    kw = dict(case_study=base.case_study, grid_only=args.grid_only, workers=args.workers,
              seeds=list(range(args.seed0, args.seed0 + args.seeds)),
              traffic_kinds=args.traffic or [base.traffic.kind])
    if args.alphas:
        kw["alphas"] = args.alphas
    kw["p_mins_dbm"] = args.pmins or [base.p_min_dbm]
    kw["sbs_counts"] = args.sbs or [base.layout.num_sbs]
    if args.strategies:
        kw["strategies"] = args.strategies
    if args.families:
        kw["families"] = args.families
    if args.pmin_alpha is not None:
        kw["pmin_alpha"] = args.pmin_alpha
    spec = SweepSpec(**kw)
    return run_sweep(spec, args.out, base=base)


def cmd_snapshot(args) -> dict:
    cfg = with_overrides(_base_config(args), alpha=args.alpha, p_min_dbm=args.pmin, rng_seed=args.seed)
    rows = snapshot(cfg, parse_strategy(args.strategy), step=args.step)
    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=SNAPSHOT_COLUMNS)
        w.writeheader()
        w.writerows({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()} for r in rows)
    finally:
        if fh is not sys.stdout:
            fh.close()
    counts = {}
    for r in rows:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    return {"out": args.out or "-", "counts": counts}


def cmd_linkbudget(args) -> dict:
    cfg = with_overrides(_base_config(args), rng_seed=args.seed)
    n = cfg.layout.num_sbs
    if not 0 <= args.sbs < n:
        raise ValueError(f"--sbs must be in [0, {n - 1}]")
    rng = step_rng(cfg.rng_seed, args.step if cfg.redraw_shadowing else 0) if args.shadowing else None
    if rng is not None:
        # advance the stream to this SBS's draws (four per SBS)
        rng.normal(size=4 * args.sbs)
    m = mbs_link(args.sbs, cfg, rng)
    h = haps_link(args.sbs, cfg, rng)
    return {"sbs": args.sbs, "position_m": list(cfg.layout.sbs_positions[args.sbs]),
            "mbs": asdict(m), "haps": asdict(h)}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hapscs", description="Cell switching with HAPS offloading: sweeps and tools.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--scenario", help="scenario JSON file (default: built-in case study)")
        sp.add_argument("--case", choices=["A", "B"], help="built-in case study when no scenario file is given")

    r = sub.add_parser("run", help="run a sweep and write CSVs plus manifest.json")
    common(r)
    r.add_argument("--alphas", type=float, nargs="+")
    r.add_argument("--pmins", type=float, nargs="+", help="P_min values in dBm")
    r.add_argument("--sbs", type=int, nargs="+", help="SBS counts (perfect squares)")
    r.add_argument("--strategies", nargs="+", help=f"any of {', '.join(STRATEGY_IDS)} or their short forms")
    r.add_argument("--traffic", nargs="+", help="traffic kinds")
    r.add_argument("--families", nargs="+", choices=["alpha", "pmin", "size"])
    r.add_argument("--pmin-alpha", type=float, help="load intensity for the P_min family (default 0.5)")
    r.add_argument("--seeds", type=int, default=50, help="number of seeds")
    r.add_argument("--seed0", type=int, default=0, help="first seed")
    r.add_argument("--steps", type=int, help="time steps per run (overrides the scenario)")
    r.add_argument("--grid-only", action="store_true", help="energy efficiency over grid power only")
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--out", default="results")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("snapshot", help="per-SBS status CSV for one step")
    common(s)
    s.add_argument("--strategy", required=True)
    s.add_argument("--pmin", type=float, default=-70.0)
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--step", type=int, default=0)
    s.add_argument("--out", help="CSV path (default: stdout)")
    s.set_defaults(func=cmd_snapshot)

    lb = sub.add_parser("linkbudget", help="MBS and HAPS link budget for one SBS site")
    common(lb)
    lb.add_argument("--sbs", type=int, default=0, help="SBS index")
    lb.add_argument("--seed", type=int, default=0)
    lb.add_argument("--step", type=int, default=0)
    lb.add_argument("--shadowing", action="store_true", help="include the seeded shadowing draw")
    lb.set_defaults(func=cmd_linkbudget)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except Exception as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    if not (args.cmd == "snapshot" and not args.out):
        print(json.dumps(result, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
