"""Served traffic, energy efficiency and the per-(strategy, step) record."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .power import network_power
from .state import Assoc, NetworkState, Solution


class MetricsDomainError(ValueError):
    pass


@dataclass(frozen=True)
class MetricsRecord:
    strategy: str
    step: int
    alpha: float
    p_min_dbm: float
    total_power_w: float
    grid_power_w: float
    served_traffic_qos: float
    energy_efficiency: float
    num_off: int
    solve_time_s: float
    seed: int

    def __post_init__(self):
        if self.served_traffic_qos < 0:
            raise MetricsDomainError("served traffic must be >= 0")

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_dict(self) -> dict:
        return asdict(self)


def served_traffic_with_qos(solution: Solution, state: NetworkState, layout_capacities=None) -> float:
    """Traffic (in user units) that is served with adequate signal quality.

    The MBS and HAPS contribute their native loads.  An SBS contributes
    ``C_j * lambda_j`` if it stays on, or if it is off and the station that
    absorbs its users receives at least ``P_min``; offloaded traffic is
    counted once, at the SBS.
    """
    caps = state.sbs_capacity if layout_capacities is None else np.asarray(layout_capacities, dtype=float)
    assoc = np.asarray(solution.assoc)
    if len(assoc) != state.num_sbs or len(caps) != state.num_sbs:
        raise ValueError("solution, state and capacities differ in length")
    served = (assoc == Assoc.STAYS_ON) \
        | ((assoc == Assoc.TO_MBS) & state.mbs_ok) \
        | ((assoc == Assoc.TO_HAPS) & state.haps_ok)
    terms = [state.mbs_profile.capacity * state.lambda_m0, state.haps_profile.capacity * state.lambda_h0]
    terms.extend((caps * state.sbs_loads)[served])
    return math.fsum(terms)


def energy_efficiency(t_qos: float, power_w: float) -> float:
    if not power_w > 0:
        raise MetricsDomainError(f"energy efficiency needs positive power, got {power_w}")
    return t_qos / power_w


def make_record(strategy: str, solution: Solution, state: NetworkState, *, alpha: float, p_min_dbm: float,
                seed: int, use_grid_power: bool = False) -> MetricsRecord:
    power = network_power(solution.assoc, state)
    t_qos = served_traffic_with_qos(solution, state)
    ee = energy_efficiency(t_qos, power.grid_w if use_grid_power else power.total_w)
    return MetricsRecord(
        strategy=strategy,
        step=state.step,
        alpha=float(alpha),
        p_min_dbm=float(p_min_dbm),
        total_power_w=power.total_w,
        grid_power_w=power.grid_w,
        served_traffic_qos=t_qos,
        energy_efficiency=ee,
        num_off=solution.num_off,
        solve_time_s=solution.solve_time_s,
        seed=int(seed),
    )
