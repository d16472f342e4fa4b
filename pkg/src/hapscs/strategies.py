"""Benchmark cell-switching strategies sharing the :class:`Solution` interface."""

from __future__ import annotations

import time

import numpy as np

from .optimizer import build_mip, haps_enhanced_cs, reduce_instance, solve_choice
from .state import Assoc, NetworkState, Solution, make_solution

STRATEGY_IDS = ("all_on", "sorting", "sorting_qos", "terrestrial_cs", "haps_cs", "haps_cs_noqos", "exhaustive")
CLI_TOKENS = {
    "all-on": "all_on",
    "sorting": "sorting",
    "sorting-qos": "sorting_qos",
    "terrestrial": "terrestrial_cs",
    "haps-cs": "haps_cs",
    "haps-cs-noqos": "haps_cs_noqos",
    "es": "exhaustive",
}
ES_CAP = 20


def parse_strategy(token: str) -> str:
    if token in STRATEGY_IDS:
        return token
    try:
        return CLI_TOKENS[token]
    except KeyError:
        raise ValueError(f"unknown strategy {token!r}; choose from {sorted(CLI_TOKENS)}") from None


def all_on(state: NetworkState) -> Solution:
    return make_solution(np.zeros(state.num_sbs, dtype=int), state, optimal=False)


def sorting(state: NetworkState, qos_aware: bool = False) -> Solution:
    """Switch off the least-loaded SBSs onto the MBS while its capacity lasts.

    An SBS that would overflow the MBS is skipped and the scan continues.
    """
    t0 = time.perf_counter()
    lam = state.sbs_loads
    assoc = np.zeros(state.num_sbs, dtype=int)
    load_m = state.lambda_m0
    for j in sorted(range(state.num_sbs), key=lambda j: (lam[j], j)):
        if qos_aware and not state.mbs_ok[j]:
            continue
        extra = lam[j] * state.phi_m[j]
        if load_m + extra <= 1.0:
            load_m += extra
            assoc[j] = Assoc.TO_MBS
    return make_solution(assoc, state, solve_time_s=time.perf_counter() - t0)


def terrestrial_cs(state: NetworkState, hints=()) -> Solution:
    """Exact MBS-only switching without the received-power constraint."""
    problem = reduce_instance(build_mip(state, enforce_qos=False), allow_haps=False)
    return solve_choice(problem, state, hints)


# ---------------------------------------------------------------------------
# exhaustive search


def _option_table(state: NetworkState, enforce_qos: bool):
    """Per-SBS (cost, MBS load, HAPS load) of each association, straight from the power model."""
    lam = state.sbs_loads
    k_m = state.mbs_profile.eta * state.mbs_profile.p_transmit
    k_h = state.haps_profile.eta * state.haps_profile.p_transmit
    on = np.array([p.p_operational + p.eta * l * p.p_transmit for p, l in zip(state.sbs_profiles, lam)])
    sleep = np.array([p.p_sleep for p in state.sbs_profiles])
    wm, wh = lam * state.phi_m, lam * state.phi_h
    cost = np.stack([on, sleep + k_m * wm, sleep + k_h * wh], axis=1)
    if enforce_qos:
        cost[~state.mbs_ok, 1] = np.inf
        cost[~state.haps_ok, 2] = np.inf
    load_m = np.stack([np.zeros_like(wm), wm, np.zeros_like(wm)], axis=1)
    load_h = np.stack([np.zeros_like(wh), np.zeros_like(wh), wh], axis=1)
    return cost, load_m, load_h


def _enumerate(cost, load_m, load_h, idx, cap_m, cap_h):
    """Every association of the SBSs in ``idx``: (codes, cost, MBS load, HAPS load)."""
    codes = np.zeros((1, len(idx)), dtype=np.int8)
    c, m, h = np.zeros(1), np.zeros(1), np.zeros(1)
    for pos, j in enumerate(idx):
        codes = np.repeat(codes, 3, axis=0)
        codes[:, pos] = np.tile(np.arange(3), len(c))
        c = (c[:, None] + cost[j][None, :]).ravel()
        m = (m[:, None] + load_m[j][None, :]).ravel()
        h = (h[:, None] + load_h[j][None, :]).ravel()
        keep = np.isfinite(c) & (m <= cap_m + 1e-12) & (h <= cap_h + 1e-12)
        codes, c, m, h = codes[keep], c[keep], m[keep], h[keep]
    return codes, c, m, h


def exhaustive_search(state: NetworkState, enforce_qos: bool = True, cap: int = ES_CAP,
                      chunk_elems: int = 4_000_000) -> Solution:
    """Global optimum over all 2^s ON/OFF vectors, each with its best MBS/HAPS split.

    All 3^s (state, association) combinations are covered by enumerating the
    two halves of the SBS list separately and scanning every pair.
    """
    s = state.num_sbs
    if s > cap:
        raise ValueError(f"exhaustive search refused: s={s} exceeds the cap of {cap} SBSs")
    t0 = time.perf_counter()
    cost, load_m, load_h = _option_table(state, enforce_qos)
    cap_m, cap_h = 1.0 - state.lambda_m0, 1.0 - state.lambda_h0
    half = s // 2
    left = _enumerate(cost, load_m, load_h, range(half), cap_m, cap_h)
    right = _enumerate(cost, load_m, load_h, range(half, s), cap_m, cap_h)
    lc, lm, lh = left[1], left[2], left[3]
    rc, rm, rh = right[1], right[2], right[3]
    best, best_pair = np.inf, None
    step = max(1, chunk_elems // max(len(rc), 1))
    for a in range(0, len(lc), step):
        tot = lc[a:a + step, None] + rc[None, :]
        ok = ((lm[a:a + step, None] + rm[None, :]) <= cap_m + 1e-12) & ((lh[a:a + step, None] + rh[None, :]) <= cap_h + 1e-12)
        tot = np.where(ok, tot, np.inf)
        flat = int(np.argmin(tot))
        i, k = divmod(flat, tot.shape[1])
        if tot[i, k] < best:
            best, best_pair = tot[i, k], (a + i, k)
    if best_pair is None:
        raise RuntimeError("exhaustive search found no feasible configuration")
    assoc = np.concatenate([left[0][best_pair[0]], right[0][best_pair[1]]]).astype(int)
    return make_solution(assoc, state, optimal=True, solve_time_s=time.perf_counter() - t0)


def run_strategy(strategy: str, state: NetworkState, es_cap: int = ES_CAP, hints=()) -> Solution:
    """Run one strategy; ``hints`` are feasible solutions the exact solvers start from."""
    strategy = parse_strategy(strategy)
    if strategy == "all_on":
        return all_on(state)
    if strategy == "sorting":
        return sorting(state)
    if strategy == "sorting_qos":
        return sorting(state, qos_aware=True)
    if strategy == "terrestrial_cs":
        return terrestrial_cs(state, hints)
    if strategy == "haps_cs":
        return haps_enhanced_cs(state, enforce_qos=True, hints=hints)
    if strategy == "haps_cs_noqos":
        return haps_enhanced_cs(state, enforce_qos=False, hints=hints)
    return exhaustive_search(state, enforce_qos=False, cap=es_cap)
