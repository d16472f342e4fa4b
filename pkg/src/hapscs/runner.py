"""Sweep harness: runs strategies over alpha / P_min / network-size grids and writes CSVs."""

from __future__ import annotations

import csv
import hashlib
import json
import math
import platform
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .channel import mw_to_dbm
from .metrics import MetricsRecord, make_record
from .scenario import ConfigError, ScenarioConfig, with_overrides
from .state import Assoc, NetworkState, build_state
from .strategies import ES_CAP, STRATEGY_IDS, parse_strategy, run_strategy

FAMILIES = ("alpha", "pmin", "size")
# strategies are run in this order inside a cell so exact solves can reuse earlier results as hints
RUN_ORDER = ("all_on", "sorting", "sorting_qos", "terrestrial_cs", "haps_cs", "haps_cs_noqos", "exhaustive")
KEY_COLUMNS = ["family", "case_study", "traffic_kind", "num_sbs", "alpha", "p_min_dbm", "strategy"]
STEP_COLUMNS = ["family", "case_study", "traffic_kind", "num_sbs", "alpha", "p_min_dbm", "strategy", "seed",
                "step", "total_power_w", "grid_power_w", "served_traffic_qos", "energy_efficiency", "num_off",
                "optimal", "gap_w", "error"]
OUTPUTS = {
    # file stem: (family, grouping keys, metric columns)
    "power-vs-alpha": ("alpha", ["alpha"], ["total_power_w", "grid_power_w", "num_off"]),
    "traffic-vs-alpha": ("alpha", ["alpha"], ["served_traffic_qos"]),
    "ee-vs-alpha": ("alpha", ["alpha"], ["energy_efficiency"]),
    "power-vs-pmin": ("pmin", ["p_min_dbm"], ["total_power_w", "grid_power_w", "num_off"]),
    "traffic-vs-pmin": ("pmin", ["p_min_dbm"], ["served_traffic_qos"]),
    "ee-vs-pmin": ("pmin", ["p_min_dbm"], ["energy_efficiency"]),
    "power-vs-s": ("size", ["num_sbs", "alpha"], ["total_power_w", "grid_power_w", "num_off"]),
}


class RunError(RuntimeError):
    pass


@dataclass
class SweepSpec:
    alphas: list = field(default_factory=lambda: [round(0.1 * i, 1) for i in range(1, 10)])
    p_mins_dbm: list = field(default_factory=lambda: [-70.0])
    sbs_counts: list = field(default_factory=lambda: [49])
    strategies: list = field(default_factory=lambda: list(STRATEGY_IDS))
    seeds: list = field(default_factory=lambda: list(range(50)))
    case_study: str = "A"
    traffic_kinds: list = field(default_factory=lambda: ["gaussian"])
    families: Optional[list] = None  # None: alpha always, pmin/size when their axis has > 1 value
    pmin_alpha: float = 0.5
    grid_only: bool = False
    es_cap: int = ES_CAP
    workers: int = 1

    def __post_init__(self):
        for name in ("alphas", "p_mins_dbm", "sbs_counts", "strategies", "seeds", "traffic_kinds"):
            if len(getattr(self, name)) == 0:
                raise ConfigError(f"sweep.{name} must be non-empty")
        if any(not 0.0 <= a <= 1.0 for a in self.alphas):
            raise ConfigError("sweep.alphas must lie in [0, 1]")
        for s in self.sbs_counts:
            if s < 1 or math.isqrt(s) ** 2 != s:
                raise ConfigError(f"sweep.sbs_counts: {s} is not a perfect square")
        self.strategies = [parse_strategy(s) for s in self.strategies]
        if self.case_study not in ("A", "B", "custom"):
            raise ConfigError(f"sweep.case_study: unknown value {self.case_study!r}")
        if self.families is None:
            fams = ["alpha"]
            if len(self.p_mins_dbm) > 1:
                fams.append("pmin")
            if len(self.sbs_counts) > 1:
                fams.append("size")
            self.families = fams
        bad = set(self.families) - set(FAMILIES)
        if bad:
            raise ConfigError(f"sweep.families: unknown {sorted(bad)}")


@dataclass(frozen=True)
class Cell:
    family: str
    traffic_kind: str
    num_sbs: int
    alpha: float
    seed: int
    p_mins: tuple  # processed strictest first


def config_hash(config: ScenarioConfig) -> str:
    blob = json.dumps(config.to_dict(), sort_keys=True, default=list).encode()
    return hashlib.sha256(blob).hexdigest()


def cell_config(base: ScenarioConfig, cell: Cell, p_min: float) -> ScenarioConfig:
    return with_overrides(base, alpha=cell.alpha, p_min_dbm=p_min, rng_seed=cell.seed,
                          num_sbs=cell.num_sbs, traffic_kind=cell.traffic_kind)


def run_step(config: ScenarioConfig, step: int, strategy: str, es_cap: int = ES_CAP,
             use_grid_power: bool = False) -> MetricsRecord:
    """One strategy on one time step, without cross-strategy hints."""
    strategy = parse_strategy(strategy)
    try:
        state = build_state(config, step)
        sol = run_strategy(strategy, state, es_cap=es_cap)
        return make_record(strategy, sol, state, alpha=config.traffic.alpha, p_min_dbm=config.p_min_dbm,
                           seed=config.rng_seed, use_grid_power=use_grid_power)
    except Exception as exc:
        raise RunError(f"step {step}, strategy {strategy}: {exc}") from exc


def _solve_all(state: NetworkState, strategies, es_cap: int, stricter: Optional[dict]):
    """Run the requested strategies on one state; returns {strategy: Solution or error string}."""
    out = {}
    for strat in RUN_ORDER:
        if strat not in strategies:
            continue
        hints = []
        if strat == "haps_cs" and stricter and not isinstance(stricter.get("haps_cs"), str):
            hints.append(stricter["haps_cs"])
        if strat == "haps_cs_noqos":
            hints.extend(out[k] for k in ("haps_cs", "terrestrial_cs") if k in out and not isinstance(out[k], str))
        try:
            out[strat] = run_strategy(strat, state, es_cap=es_cap, hints=hints)
        except Exception as exc:
            out[strat] = f"{type(exc).__name__}: {exc}"
    return out


def run_cell(base: ScenarioConfig, cell: Cell, strategies, es_cap: int = ES_CAP, grid_only: bool = False):
    """All records of one sweep cell: step-level rows plus per-strategy solve times."""
    rows = []
    for step in range(base.num_steps):
        stricter = None
        for p_min in cell.p_mins:
            cfg = cell_config(base, cell, p_min)
            key = dict(family=cell.family, case_study=base.case_study, traffic_kind=cell.traffic_kind,
                       num_sbs=cell.num_sbs, alpha=cell.alpha, p_min_dbm=float(p_min), seed=cell.seed, step=step)
            try:
                state = build_state(cfg, step)
            except Exception as exc:
                for strat in strategies:
                    rows.append({**key, "strategy": strat, "error": f"{type(exc).__name__}: {exc}"})
                continue
            sols = _solve_all(state, strategies, es_cap, stricter)
            stricter = sols
            for strat in strategies:
                sol = sols[strat]
                if isinstance(sol, str):
                    rows.append({**key, "strategy": strat, "error": sol})
                    continue
                rec = make_record(strat, sol, state, alpha=cell.alpha, p_min_dbm=p_min, seed=cell.seed,
                                  use_grid_power=grid_only)
                rows.append({**key, "strategy": strat, "total_power_w": rec.total_power_w,
                             "grid_power_w": rec.grid_power_w, "served_traffic_qos": rec.served_traffic_qos,
                             "energy_efficiency": rec.energy_efficiency, "num_off": rec.num_off,
                             "optimal": int(sol.optimal), "gap_w": float(sol.extra.get("gap_w", 0.0)),
                             "solve_time_s": rec.solve_time_s, "error": ""})
    return rows


def build_cells(spec: SweepSpec, base: ScenarioConfig) -> list[Cell]:
    cells = []
    n0 = base.layout.num_sbs
    for kind in spec.traffic_kinds:
        if "alpha" in spec.families:
            cells += [Cell("alpha", kind, n0, float(a), int(s), (float(base.p_min_dbm),))
                      for a in spec.alphas for s in spec.seeds]
        if "pmin" in spec.families:
            chain = tuple(sorted((float(p) for p in spec.p_mins_dbm), reverse=True))
            cells += [Cell("pmin", kind, n0, float(spec.pmin_alpha), int(s), chain) for s in spec.seeds]
        if "size" in spec.families:
            cells += [Cell("size", kind, int(n), float(a), int(s), (float(base.p_min_dbm),))
                      for n in spec.sbs_counts for a in spec.alphas for s in spec.seeds]
    return cells


def _strategies_for(spec: SweepSpec, cell: Cell) -> list[str]:
    # exhaustive search is only attempted where it is allowed to run
    return [s for s in spec.strategies if s != "exhaustive" or cell.num_sbs <= spec.es_cap]


def _run_cell_args(args):
    return run_cell(*args)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else str(v)


def _write_csv(path: Path, columns, rows):
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c)) for c in columns])


def _mean_std(values):
    if not values:
        return float("nan"), float("nan")
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std(ddof=1)) if len(arr) > 1 else 0.0


def aggregate(rows, family: str, group_keys, metrics):
    """Seed-averaged rows for one output family, in first-seen order."""
    groups = defaultdict(list)
    for r in rows:
        if r["family"] != family:
            continue
        key = tuple(r[k] for k in ["case_study", "traffic_kind", *group_keys, "strategy"])
        groups[key].append(r)
    out = []
    for key, members in groups.items():
        ok = [m for m in members if not m.get("error")]
        row = dict(zip(["case_study", "traffic_kind", *group_keys, "strategy"], key))
        row["n"] = len(ok)
        row["errors"] = len(members) - len(ok)
        for m in metrics:
            row[f"{m}_mean"], row[f"{m}_std"] = _mean_std([x[m] for x in ok])
        out.append(row)
    return out


def runtime_rows(rows, strategies):
    groups = defaultdict(list)
    for r in rows:
        if r["family"] == "size" and not r.get("error") and r["strategy"] in strategies:
            groups[(r["case_study"], r["traffic_kind"], r["num_sbs"], r["strategy"])].append(r["solve_time_s"])
    out = []
    for (case, kind, n, strat), times in groups.items():
        mean, std = _mean_std(times)
        out.append(dict(case_study=case, traffic_kind=kind, num_sbs=n, strategy=strat, n=len(times),
                        solve_time_s_mean=mean, solve_time_s_std=std, solve_time_s_median=float(np.median(times))))
    return out


def run_sweep(spec: SweepSpec, out_dir, base: Optional[ScenarioConfig] = None) -> dict:
    """Run every sweep cell and write the CSV families plus ``manifest.json``."""
    from .scenario import case_study_preset

    if base is None:
        base = case_study_preset(spec.case_study if spec.case_study != "custom" else "A")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cells = build_cells(spec, base)
    jobs = [(base, c, _strategies_for(spec, c), spec.es_cap, spec.grid_only) for c in cells]
    if spec.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(_run_cell_args, jobs, chunksize=max(1, len(jobs) // (4 * spec.workers))))
    else:
        results = [_run_cell_args(j) for j in jobs]
    rows = [r for res in results for r in res]

    written = {}
    _write_csv(out / "records.csv", STEP_COLUMNS, rows)
    written["records.csv"] = len(rows)
    for stem, (family, keys, metrics) in OUTPUTS.items():
        if family not in spec.families:
            continue
        agg = aggregate(rows, family, keys, metrics)
        cols = ["case_study", "traffic_kind", *keys, "strategy", "n", "errors"]
        cols += [f"{m}_{s}" for m in metrics for s in ("mean", "std")]
        _write_csv(out / f"{stem}.csv", cols, agg)
        written[f"{stem}.csv"] = len(agg)
    if "size" in spec.families:
        rt = runtime_rows(rows, spec.strategies)
        _write_csv(out / "runtime-vs-s.csv", ["case_study", "traffic_kind", "num_sbs", "strategy", "n",
                                              "solve_time_s_mean", "solve_time_s_std", "solve_time_s_median"], rt)
        written["runtime-vs-s.csv"] = len(rt)

    errors = [r for r in rows if r.get("error")]
    skipped = sorted({(c.family, c.num_sbs) for c in cells
                      if "exhaustive" in spec.strategies and c.num_sbs > spec.es_cap})
    manifest = {
        "tool": "hapscs",
        "version": __version__,
        "config_hash": config_hash(base),
        "seeds": [int(s) for s in spec.seeds],
        "spec": asdict(spec),
        "files": written,
        "num_records": len(rows),
        "num_errors": len(errors),
        "num_unproven": sum(1 for r in rows if r.get("optimal") == 0
                            and r["strategy"] in ("terrestrial_cs", "haps_cs", "haps_cs_noqos")),
        "exhaustive_skipped": [{"family": f, "num_sbs": n, "reason": f"s exceeds cap {spec.es_cap}"}
                               for f, n in skipped],
        "python": platform.python_version(),
        "numpy": np.__version__,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return {"out_dir": str(out), "records": len(rows), "errors": len(errors), "files": written}


def snapshot(config: ScenarioConfig, strategy: str, step: int = 0) -> list[dict]:
    """Per-SBS status rows (active / to_mbs / to_haps) for one step."""
    state = build_state(config, step)
    sol = run_strategy(strategy, state)
    names = {Assoc.STAYS_ON: "active", Assoc.TO_MBS: "to_mbs", Assoc.TO_HAPS: "to_haps"}
    rows = []
    for j, (x, y) in enumerate(config.layout.sbs_positions):
        rows.append(dict(sbs=j, x_m=x, y_m=y, sbs_class=config.layout.sbs_classes[j],
                         load=float(state.sbs_loads[j]), status=names[Assoc(int(sol.assoc[j]))],
                         p_r_mbs_dbm=float(mw_to_dbm(state.p_r_mbs_mw[j])),
                         p_r_haps_dbm=float(mw_to_dbm(state.p_r_haps_mw[j]))))
    return rows


SNAPSHOT_COLUMNS = ["sbs", "x_m", "y_m", "sbs_class", "load", "status", "p_r_mbs_dbm", "p_r_haps_dbm"]
