"""Per-step network snapshot and the solution type shared by all strategies."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import dbm_to_mw, network_received_powers
from .scenario import BsProfile, ScenarioConfig, generate_loads


class Assoc(enum.IntEnum):
    STAYS_ON = 0
    TO_MBS = 1
    TO_HAPS = 2


@dataclass(frozen=True, eq=False)
class NetworkState:
    step: int
    sbs_loads: np.ndarray
    p_r_mbs_mw: np.ndarray
    p_r_haps_mw: np.ndarray
    sbs_profiles: tuple[BsProfile, ...]
    mbs_profile: BsProfile
    haps_profile: BsProfile
    lambda_m0: float = 0.0
    lambda_h0: float = 0.0
    p_min_mw: float = 1e-7

    def __post_init__(self):
        n = len(self.sbs_loads)
        if not (len(self.p_r_mbs_mw) == len(self.p_r_haps_mw) == len(self.sbs_profiles) == n):
            raise ValueError("per-SBS arrays differ in length")
        if np.any((self.sbs_loads < 0) | (self.sbs_loads > 1)):
            raise ValueError("SBS loads must lie in [0, 1]")
        if np.any(self.p_r_mbs_mw <= 0) or np.any(self.p_r_haps_mw <= 0):
            raise ValueError("received powers must be > 0")

    @property
    def num_sbs(self) -> int:
        return len(self.sbs_loads)

    @property
    def sbs_capacity(self) -> np.ndarray:
        return np.array([p.capacity for p in self.sbs_profiles])

    @property
    def phi_m(self) -> np.ndarray:
        return self.sbs_capacity / self.mbs_profile.capacity

    @property
    def phi_h(self) -> np.ndarray:
        return self.sbs_capacity / self.haps_profile.capacity

    @property
    def mbs_ok(self) -> np.ndarray:
        """Offload-to-MBS meets the outage threshold."""
        return self.p_r_mbs_mw >= self.p_min_mw

    @property
    def haps_ok(self) -> np.ndarray:
        return self.p_r_haps_mw >= self.p_min_mw


def build_state(config: ScenarioConfig, step: int = 0) -> NetworkState:
    loads = generate_loads(config, step)
    p_m, p_h = network_received_powers(config, step)
    return NetworkState(
        step=step,
        sbs_loads=loads,
        p_r_mbs_mw=p_m,
        p_r_haps_mw=p_h,
        sbs_profiles=tuple(config.sbs_profiles),
        mbs_profile=config.profile("macro"),
        haps_profile=config.profile("haps"),
        lambda_m0=config.lambda_m0,
        lambda_h0=config.lambda_h0,
        p_min_mw=float(dbm_to_mw(config.p_min_dbm)),
    )


def offload_loads(assoc, state: NetworkState) -> tuple[float, float]:
    """MBS and HAPS loads after offloading the OFF SBS groups."""
    assoc = np.asarray(assoc)
    lam = state.sbs_loads
    lm = math.fsum([state.lambda_m0, *(lam * state.phi_m)[assoc == Assoc.TO_MBS]])
    lh = math.fsum([state.lambda_h0, *(lam * state.phi_h)[assoc == Assoc.TO_HAPS]])
    return lm, lh


@dataclass
class Solution:
    delta: np.ndarray
    assoc: np.ndarray
    lambda_m: float
    lambda_h: float
    objective_w: float
    optimal: bool = False
    solve_time_s: float = 0.0
    nodes: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def num_off(self) -> int:
        return int(np.sum(self.delta == 0))


def make_solution(assoc, state: NetworkState, *, optimal=False, solve_time_s=0.0, nodes=0) -> Solution:
    from .power import network_power

    assoc = np.asarray(assoc, dtype=int)
    delta = (assoc == Assoc.STAYS_ON).astype(int)
    lm, lh = offload_loads(assoc, state)
    total = network_power(assoc, state).total_w
    return Solution(delta, assoc, lm, lh, total, optimal, solve_time_s, nodes)
