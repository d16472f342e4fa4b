"""Linearised cell-switching MIP and its exact branch-and-bound solver.

Variables per SBS j: ``delta_j`` (1 = ON), ``s_j`` (1 = offload to MBS,
0 = offload to HAPS) and ``z_j = delta_j * s_j``.  Once the received powers
are fixed the program decomposes into one 3-way choice per SBS
(ON / OFF->MBS / OFF->HAPS) coupled only through the two capacity rows, which
is what :func:`solve_exact` searches.
"""

from __future__ import annotations

import heapq
import itertools
import math
import time
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .state import Assoc, NetworkState, Solution, make_solution

# rows over (s, delta, z):  z - s <= 0,  z - delta <= 0,  z - s - delta >= -1
LINK_ROWS = np.array([[-1.0, 0.0, 1.0], [0.0, -1.0, 1.0], [-1.0, -1.0, 1.0]])
LINK_SENSE = ("<=", "<=", ">=")
LINK_RHS = np.array([0.0, 0.0, -1.0])

# canonical (delta, s, z) point of each association
CHOICE_POINTS = {
    Assoc.STAYS_ON: (1, 0, 0),
    Assoc.TO_MBS: (0, 1, 0),
    Assoc.TO_HAPS: (0, 0, 0),
}

PRUNE_TOL = 1e-10
CAP_TOL = 1e-12


class InfeasibleError(RuntimeError):
    pass


def linking_holds(delta: int, s: int, z: int) -> bool:
    lhs = LINK_ROWS @ np.array([s, delta, z], dtype=float)
    return bool(lhs[0] <= LINK_RHS[0] and lhs[1] <= LINK_RHS[1] and lhs[2] >= LINK_RHS[2])


@dataclass
class MipInstance:
    """Coefficient arrays of the linearised program.

    Every ``*_coef`` array has shape ``(s, 3)`` with columns ``(delta, s, z)``.
    Capacity rows read ``sum coef . x <= rhs``; QoS rows read
    ``coef_j . x_j >= qos_rhs_j``.
    """

    obj_coef: np.ndarray
    obj_offset: float
    mbs_coef: np.ndarray
    mbs_rhs: float
    haps_coef: np.ndarray
    haps_rhs: float
    qos_coef: Optional[np.ndarray]
    qos_rhs: Optional[np.ndarray]
    allow_mbs: np.ndarray
    allow_haps: np.ndarray

    @property
    def num_sbs(self) -> int:
        return len(self.obj_coef)

    @property
    def num_binaries(self) -> int:
        return 3 * self.num_sbs

    def objective(self, delta, s, z) -> float:
        x = np.stack([delta, s, z], axis=1).astype(float)
        return self.obj_offset + float(np.sum(self.obj_coef * x))

    def feasible(self, delta, s, z, tol=1e-9) -> bool:
        delta, s, z = (np.asarray(v) for v in (delta, s, z))
        x = np.stack([delta, s, z], axis=1).astype(float)
        if np.sum(self.mbs_coef * x) > self.mbs_rhs + tol:
            return False
        if np.sum(self.haps_coef * x) > self.haps_rhs + tol:
            return False
        if self.qos_coef is not None and np.any(np.sum(self.qos_coef * x, axis=1) < self.qos_rhs - tol):
            return False
        return all(linking_holds(d, ss, zz) for d, ss, zz in zip(delta, s, z))


def build_mip(state: NetworkState, enforce_qos: bool = True) -> MipInstance:
    lam = state.sbs_loads
    m = lam * state.phi_m
    h = lam * state.phi_h
    k_m = state.mbs_profile.eta * state.mbs_profile.p_transmit
    k_h = state.haps_profile.eta * state.haps_profile.p_transmit
    p_o = np.array([p.p_operational for p in state.sbs_profiles])
    p_t = np.array([p.p_transmit for p in state.sbs_profiles])
    eta = np.array([p.eta for p in state.sbs_profiles])
    p_s = np.array([p.p_sleep for p in state.sbs_profiles])

    obj = np.stack([p_o + eta * lam * p_t - p_s - k_h * h, k_m * m - k_h * h, -k_m * m + k_h * h], axis=1)
    offset = math.fsum([
        state.mbs_profile.p_operational, k_m * state.lambda_m0,
        state.haps_profile.p_operational, k_h * state.lambda_h0,
        *(k_h * h), *p_s,
    ])
    zeros = np.zeros_like(m)
    mbs_coef = np.stack([zeros, m, -m], axis=1)
    haps_coef = np.stack([-h, -h, h], axis=1)
    haps_rhs = 1.0 - state.lambda_h0 - math.fsum(h)

    qos_coef = qos_rhs = None
    if enforce_qos:
        pm, ph, pmin = state.p_r_mbs_mw, state.p_r_haps_mw, state.p_min_mw
        qos_coef = np.stack([1.0 - ph + pmin, pm - ph, ph - pm], axis=1)
        qos_rhs = pmin - ph
        allow_mbs, allow_haps = state.mbs_ok.copy(), state.haps_ok.copy()
    else:
        allow_mbs = np.ones(len(lam), dtype=bool)
        allow_haps = np.ones(len(lam), dtype=bool)
    return MipInstance(obj, offset, mbs_coef, 1.0 - state.lambda_m0, haps_coef, haps_rhs,
                       qos_coef, qos_rhs, allow_mbs, allow_haps)


def dump_lp(inst: MipInstance) -> str:
    """LP-format style listing for cross-checking with an external solver."""
    n = inst.num_sbs

    def terms(coef_rows, cols=("d", "s", "z")):
        out = []
        for j in range(n):
            for c, name in zip(coef_rows[j], cols):
                if c != 0:
                    out.append(f"{c:+.12g} {name}{j}")
        return " ".join(out) or "0"

    lines = ["\\ cell switching MIP", "Minimize", f" obj: {terms(inst.obj_coef)} + {inst.obj_offset:.12g}",
             "Subject To", f" cap_mbs: {terms(inst.mbs_coef)} <= {inst.mbs_rhs:.12g}",
             f" cap_haps: {terms(inst.haps_coef)} <= {inst.haps_rhs:.12g}"]
    if inst.qos_coef is not None:
        for j in range(n):
            c = inst.qos_coef[j]
            lines.append(f" qos{j}: {c[0]:+.12g} d{j} {c[1]:+.12g} s{j} {c[2]:+.12g} z{j} >= {inst.qos_rhs[j]:.12g}")
    for j in range(n):
        lines += [f" link_s{j}: z{j} - s{j} <= 0", f" link_d{j}: z{j} - d{j} <= 0",
                  f" link_sd{j}: z{j} - s{j} - d{j} >= -1"]
    lines.append("Binary")
    lines.append(" " + " ".join(f"d{j} s{j} z{j}" for j in range(n)))
    lines.append("End")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# reduction to per-SBS choices


@dataclass
class ChoiceProblem:
    """Maximise total saving over per-item choices {ON, MBS, HAPS}.

    ``save_*`` is the saving relative to ON (``-inf`` = forbidden);
    ``w_mbs``/``w_haps`` are the capacity consumed by the matching option.
    """

    base_cost: float
    save_mbs: np.ndarray
    save_haps: np.ndarray
    w_mbs: np.ndarray
    w_haps: np.ndarray
    cap_mbs: float
    cap_haps: float

    @property
    def n(self) -> int:
        return len(self.save_mbs)


def reduce_instance(inst: MipInstance, allow_haps: bool = True) -> ChoiceProblem:
    pts = {k: np.array(v, dtype=float) for k, v in CHOICE_POINTS.items()}
    cost = {k: inst.obj_coef @ p for k, p in pts.items()}
    mrow = {k: inst.mbs_coef @ p for k, p in pts.items()}
    hrow = {k: inst.haps_coef @ p for k, p in pts.items()}
    on, to_m, to_h = Assoc.STAYS_ON, Assoc.TO_MBS, Assoc.TO_HAPS
    if np.any(np.abs(hrow[to_m] - hrow[on]) > 1e-12) or np.any(np.abs(mrow[to_h] - mrow[on]) > 1e-12):
        raise ValueError("capacity rows are not separable per offload target")
    save_m = np.where(inst.allow_mbs, cost[on] - cost[to_m], -np.inf)
    save_h = np.where(inst.allow_haps & allow_haps, cost[on] - cost[to_h], -np.inf)
    return ChoiceProblem(
        base_cost=inst.obj_offset + math.fsum(cost[on]),
        save_mbs=save_m,
        save_haps=save_h,
        w_mbs=mrow[to_m] - mrow[on],
        w_haps=hrow[to_h] - hrow[on],
        cap_mbs=inst.mbs_rhs - math.fsum(mrow[on]),
        cap_haps=inst.haps_rhs - math.fsum(hrow[on]),
    )


# ---------------------------------------------------------------------------
# bounds
#
# The bound on the free items is the Lagrangian dual of the LP relaxation with
# the MBS row (mu), the HAPS row (nu) and a cardinality row ``#off <= K`` (rho)
# dualised:
#   L = mu*A + nu*B + rho*K + sum_j max(0, sm_j - rho - mu*wm_j, sh_j - rho - nu*wh_j)
# Any non-negative multipliers give a valid bound.  The cardinality row is what
# makes the bound tight: the savings of different SBSs are nearly equal, so
# without it the relaxation packs fractional items into both rows.


def _prefix_count(sizes: np.ndarray, cap: float) -> int:
    """Largest k such that the k smallest sizes fit into ``cap``."""
    if len(sizes) == 0:
        return 0
    return int(np.searchsorted(np.cumsum(np.sort(sizes)), cap + CAP_TOL, side="right"))


def max_offload_count(save_m, save_h, w_m, w_h, cap_m, cap_h) -> int:
    """Upper bound on how many items can be switched off together."""
    in_m = save_m > -np.inf
    in_h = save_h > -np.inf
    count = _prefix_count(w_m[in_m], cap_m) + _prefix_count(w_h[in_h], cap_h)
    # with proportional weights both rows can be merged into one
    both = in_m | in_h
    pos = (w_m > 0) & (w_h > 0)
    if np.any(pos):
        ratio = w_h[pos] / w_m[pos]
        if np.ptp(ratio) <= 1e-12 * ratio[0] and np.all((w_m == 0) == (w_h == 0)):
            count = min(count, _prefix_count(w_m[both], cap_m + cap_h / ratio[0]))
    return min(count, int(both.sum()))


def _line_min(base: np.ndarray, intercept: np.ndarray, weight: np.ndarray, cap: float) -> float:
    """argmin over x >= 0 of ``cap*x + sum_j max(base_j, intercept_j - x*weight_j)``."""
    with np.errstate(invalid="ignore", divide="ignore"):
        kink = np.where((weight > 0) & (intercept > base), (intercept - base) / np.where(weight > 0, weight, 1.0), 0.0)
    live = kink > 0
    if not np.any(live):
        return 0.0
    k, w = kink[live], weight[live]
    order = np.argsort(-k, kind="stable")
    i = int(np.searchsorted(np.cumsum(w[order]), cap, side="right"))
    return float(k[order][i]) if i < len(order) else 0.0


def _dual_value(sm, sh, wm, wh, cap_m, cap_h, count, mu, nu, rho) -> float:
    t = np.maximum(0.0, np.maximum(sm - rho - mu * wm, sh - rho - nu * wh))
    return mu * cap_m + nu * cap_h + rho * count + math.fsum(t)


def lagrangian_bound(save_m, save_h, w_m, w_h, cap_m, cap_h, start=None, max_rounds=50):
    """Upper bound on the achievable saving of the free items.

    Minimises L one multiplier at a time (each 1-D problem is a weighted
    quantile, solved exactly) until a full cycle stops improving.  Returns the
    bound and the multipliers ``(mu, nu, rho)`` so children can warm-start.
    """
    x = tuple(start) if start is not None else (0.0, 0.0, 0.0)
    if len(save_m) == 0:
        return 0.0, x
    if cap_m < -CAP_TOL or cap_h < -CAP_TOL:
        return -np.inf, x
    cap_m, cap_h = max(cap_m, 0.0), max(cap_h, 0.0)
    count = max_offload_count(save_m, save_h, w_m, w_h, cap_m, cap_h)
    mu, nu, rho = x
    best = _dual_value(save_m, save_h, w_m, w_h, cap_m, cap_h, count, mu, nu, rho)
    zeros, ones = np.zeros_like(save_m), np.ones_like(save_m)
    for _ in range(max_rounds):
        mu = _line_min(np.maximum(0.0, save_h - rho - nu * w_h), save_m - rho, w_m, cap_m)
        nu = _line_min(np.maximum(0.0, save_m - rho - mu * w_m), save_h - rho, w_h, cap_h)
        top = np.maximum(save_m - mu * w_m, save_h - nu * w_h)
        rho = _line_min(zeros, top, ones, count)
        val = _dual_value(save_m, save_h, w_m, w_h, cap_m, cap_h, count, mu, nu, rho)
        if val >= best - 1e-12 * max(1.0, abs(best)):
            if val < best:
                best, x = val, (mu, nu, rho)
            break
        best, x = val, (mu, nu, rho)
    return best, x


# ---------------------------------------------------------------------------
# branch and bound

# Expanded-node budget per solve.  Instances whose savings are nearly equal can
# have thousands of near-optimal bin splits within a milliwatt of each other;
# past the budget the incumbent is returned with ``optimal=False``.
NODE_LIMIT = 4000


@dataclass
class SearchResult:
    choice: np.ndarray
    saving: float
    optimal: bool
    nodes: int
    upper_bound: float  # proven bound on the best achievable saving


def choice_saving(p: ChoiceProblem, choice) -> Optional[float]:
    """Total saving of a full choice vector, or None if it is infeasible."""
    choice = np.asarray(choice)
    if choice.shape != (p.n,) or np.any((choice < 0) | (choice > 2)):
        return None
    to_m, to_h = choice == 1, choice == 2
    if not (np.all(np.isfinite(p.save_mbs[to_m])) and np.all(np.isfinite(p.save_haps[to_h]))):
        return None
    if math.fsum(p.w_mbs[to_m]) > p.cap_mbs + CAP_TOL or math.fsum(p.w_haps[to_h]) > p.cap_haps + CAP_TOL:
        return None
    return math.fsum([*p.save_mbs[to_m], *p.save_haps[to_h]])


def _greedy(p: ChoiceProblem) -> tuple[np.ndarray, float]:
    """Feasible warm start: best option per item by saving density."""
    choice = np.zeros(p.n, dtype=int)
    cm, ch = p.cap_mbs, p.cap_haps
    cand = []
    for j in range(p.n):
        for k, sv, w in ((1, p.save_mbs[j], p.w_mbs[j]), (2, p.save_haps[j], p.w_haps[j])):
            if np.isfinite(sv) and sv > 0:
                cand.append((-(sv / w) if w > 0 else -np.inf, -sv, j, k))
    cand.sort()
    for _, _, j, k in cand:
        if choice[j]:
            continue
        if k == 1 and p.w_mbs[j] <= cm + CAP_TOL:
            choice[j], cm = 1, cm - p.w_mbs[j]
        elif k == 2 and p.w_haps[j] <= ch + CAP_TOL:
            choice[j], ch = 2, ch - p.w_haps[j]
    return choice, choice_saving(p, choice)


def branch_and_bound(p: ChoiceProblem, node_limit: int = NODE_LIMIT) -> SearchResult:
    """Best-first search over the per-item choices {ON, MBS, HAPS}."""
    n = p.n
    sm = np.where(np.isfinite(p.save_mbs) & (p.save_mbs > 0), p.save_mbs, -np.inf)
    sh = np.where(np.isfinite(p.save_haps) & (p.save_haps > 0), p.save_haps, -np.inf)
    if np.any(p.w_mbs < 0) or np.any(p.w_haps < 0):
        raise ValueError("negative capacity weights are not supported")

    best_choice, best = _greedy(p)

    # zero-weight items take their best option outright
    fixed = np.zeros(n, dtype=int)
    free = []
    for j in range(n):
        opts = [(0.0, 0)]
        if sm[j] > -np.inf:
            opts.append((sm[j], 1))
        if sh[j] > -np.inf:
            opts.append((sh[j], 2))
        if len(opts) == 1:
            continue
        if (sm[j] == -np.inf or p.w_mbs[j] == 0) and (sh[j] == -np.inf or p.w_haps[j] == 0):
            fixed[j] = max(opts, key=lambda t: (t[0], -t[1]))[1]
        else:
            free.append(j)
    fixed_save = math.fsum(sm[j] if fixed[j] == 1 else sh[j] for j in range(n) if fixed[j])

    def sort_key(j):
        return (-max(p.w_mbs[j] if sm[j] > -np.inf else 0.0, p.w_haps[j] if sh[j] > -np.inf else 0.0),
                sm[j], sh[j], p.w_mbs[j], p.w_haps[j], j)

    order = sorted(free, key=sort_key)
    key_of = [sort_key(j)[:-1] for j in order]
    # identical consecutive items only need non-decreasing choices
    same_as_prev = [d > 0 and key_of[d] == key_of[d - 1] for d in range(len(order))]
    o_sm, o_sh = sm[order], sh[order]
    o_wm, o_wh = p.w_mbs[order], p.w_haps[order]
    m = len(order)

    def bound(depth, cap_m, cap_h, start=None):
        return lagrangian_bound(o_sm[depth:], o_sh[depth:], o_wm[depth:], o_wh[depth:], cap_m, cap_h, start)

    def tail_is_free(depth, cap_m, cap_h):
        """If every remaining item can take its best option at once, return that completion."""
        rest_m, rest_h = o_sm[depth:], o_sh[depth:]
        pick = np.where((rest_m > 0) & (rest_m > rest_h), 1, np.where(rest_h > 0, 2, 0))
        pick = np.where((rest_m > 0) & (rest_m == rest_h), 1, pick)
        use_m = math.fsum(o_wm[depth:][pick == 1])
        use_h = math.fsum(o_wh[depth:][pick == 2])
        if use_m <= cap_m + CAP_TOL and use_h <= cap_h + CAP_TOL:
            val = math.fsum(np.where(pick == 1, rest_m, np.where(pick == 2, rest_h, 0.0)))
            return pick, val
        return None

    def round_duals(depth, cap_m, cap_h, mult):
        """Feasible completion guided by the node's reduced savings."""
        mu, nu, rho = mult
        rest_m, rest_h = o_sm[depth:], o_sh[depth:]
        red_m = rest_m - mu * o_wm[depth:] - rho
        red_h = rest_h - nu * o_wh[depth:] - rho
        pick = np.zeros(m - depth, dtype=int)
        tail = 0.0
        # reduced-saving order first, then raw saving to use leftover capacity
        for key in (np.maximum(red_m, red_h), np.maximum(rest_m, rest_h)):
            for i in np.argsort(-key, kind="stable"):
                if pick[i] or key[i] <= 0:
                    continue
                for _, sv, k in sorted(((red_m[i], rest_m[i], 1), (red_h[i], rest_h[i], 2)), reverse=True):
                    w = o_wm[depth + i] if k == 1 else o_wh[depth + i]
                    room = cap_m if k == 1 else cap_h
                    if sv > 0 and w <= room + CAP_TOL:
                        pick[i] = k
                        tail += sv
                        if k == 1:
                            cap_m -= w
                        else:
                            cap_h -= w
                        break
        return pick, tail

    cap_m0 = p.cap_mbs - math.fsum(p.w_mbs[fixed == 1])
    cap_h0 = p.cap_haps - math.fsum(p.w_haps[fixed == 2])
    if cap_m0 < -CAP_TOL or cap_h0 < -CAP_TOL:
        raise InfeasibleError("zero-weight assignments already exceed capacity")
    best_local = best - fixed_save  # compared within the free-item subproblem
    best_path = None
    counter = itertools.count()
    root_b, root_x = bound(0, cap_m0, cap_h0)
    heap = [(-root_b, 0, next(counter), 0, cap_m0, cap_h0, 0.0, (), root_x)]
    nodes = 0
    open_bound = -np.inf
    while heap:
        negb, _, _, depth, cap_m, cap_h, val, path, mult = heapq.heappop(heap)
        if -negb <= best_local + PRUNE_TOL:
            break
        if nodes >= node_limit:
            open_bound = -negb
            break
        nodes += 1
        pick, tail_val = round_duals(depth, cap_m, cap_h, mult)
        if val + tail_val > best_local + PRUNE_TOL:
            best_local, best_path = val + tail_val, path + tuple(int(x) for x in pick)
            if -negb <= best_local + PRUNE_TOL:
                break
        done = tail_is_free(depth, cap_m, cap_h)
        if done is not None:
            pick, tail_val = done
            if val + tail_val > best_local + PRUNE_TOL:
                best_local, best_path = val + tail_val, path + tuple(int(x) for x in pick)
            continue
        if depth == m:
            continue
        lowest = path[-1] if same_as_prev[depth] else 0
        for k in (0, 1, 2):
            if k < lowest:
                continue
            if k == 0:
                nm, nh, nv = cap_m, cap_h, val
            elif k == 1:
                if o_sm[depth] == -np.inf or o_wm[depth] > cap_m + CAP_TOL:
                    continue
                nm, nh, nv = cap_m - o_wm[depth], cap_h, val + o_sm[depth]
            else:
                if o_sh[depth] == -np.inf or o_wh[depth] > cap_h + CAP_TOL:
                    continue
                nm, nh, nv = cap_m, cap_h - o_wh[depth], val + o_sh[depth]
            b, x = bound(depth + 1, nm, nh, mult)
            b += nv
            if b <= best_local + PRUNE_TOL:
                continue
            heapq.heappush(heap, (-b, -(depth + 1), next(counter), depth + 1, nm, nh, nv, path + (k,), x))

    optimal = open_bound == -np.inf
    if best_path is not None:
        best_choice = fixed.copy()
        for j, k in zip(order, best_path):
            best_choice[j] = k
    saving = choice_saving(p, best_choice)
    upper = saving if optimal else max(saving, fixed_save + open_bound)
    return SearchResult(best_choice, saving, optimal, nodes, upper)


_SEARCH_CACHE: "OrderedDict[bytes, tuple[SearchResult, float]]" = OrderedDict()
_CACHE_SIZE = 2048


def _fingerprint(p: ChoiceProblem, node_limit: int) -> bytes:
    parts = [np.asarray(x, dtype=float).tobytes() for x in (p.save_mbs, p.save_haps, p.w_mbs, p.w_haps)]
    return b"|".join(parts) + repr((p.cap_mbs, p.cap_haps, node_limit)).encode()


def cached_search(p: ChoiceProblem, node_limit: int = NODE_LIMIT) -> tuple[SearchResult, float]:
    """Search result and its original wall-clock time, memoised per process.

    Identical reduced problems recur across a sweep (NoQoS does not depend on
    the shadowing seed), and the search is deterministic.
    """
    key = _fingerprint(p, node_limit)
    hit = _SEARCH_CACHE.get(key)
    if hit is not None:
        _SEARCH_CACHE.move_to_end(key)
        res, elapsed = hit
        return SearchResult(res.choice.copy(), res.saving, res.optimal, res.nodes, res.upper_bound), elapsed
    t0 = time.perf_counter()
    res = branch_and_bound(p, node_limit)
    elapsed = time.perf_counter() - t0
    _SEARCH_CACHE[key] = (res, elapsed)
    if len(_SEARCH_CACHE) > _CACHE_SIZE:
        _SEARCH_CACHE.popitem(last=False)
    return SearchResult(res.choice.copy(), res.saving, res.optimal, res.nodes, res.upper_bound), elapsed


def solve_choice(p: ChoiceProblem, state: NetworkState, hints=(), node_limit: int = NODE_LIMIT) -> Solution:
    """Solve a reduced problem and decode it.

    ``hints`` are feasible Solutions of the same state; the best of the search
    result and the hints is returned, so the answer is never worse than any
    hint even when the node budget stops the search early.
    """
    res, elapsed = cached_search(p, node_limit)
    choice, saving = res.choice, res.saving
    for h in hints:
        v = choice_saving(p, h.assoc)
        if v is not None and v > saving + PRUNE_TOL:
            choice, saving = np.asarray(h.assoc, dtype=int).copy(), v
    sol = make_solution(choice, state, optimal=res.optimal, solve_time_s=elapsed, nodes=res.nodes)
    if abs(sol.objective_w - (p.base_cost - saving)) > 1e-6:
        raise RuntimeError("solver objective disagrees with the power model")
    sol.extra["gap_w"] = max(res.upper_bound - saving, 0.0)
    return sol


def solve_exact(inst: MipInstance, state: NetworkState, hints=(), node_limit: int = NODE_LIMIT) -> Solution:
    """Optimal solution of the linearised program (``optimal`` says whether it was proven)."""
    return solve_choice(reduce_instance(inst), state, hints, node_limit)


def decode(solution: Solution) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(delta, s, z) binaries of a solution, with s = z = 0 for ON stations."""
    delta = (solution.assoc == Assoc.STAYS_ON).astype(int)
    s = (solution.assoc == Assoc.TO_MBS).astype(int)
    return delta, s, delta * s


def haps_enhanced_cs(state: NetworkState, enforce_qos: bool = True, hints=(),
                     node_limit: int = NODE_LIMIT) -> Solution:
    return solve_exact(build_mip(state, enforce_qos), state, hints, node_limit)
