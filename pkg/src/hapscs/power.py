"""EARTH-style affine power model for single stations and the whole network."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenario import BsProfile
from .state import Assoc, NetworkState, offload_loads


class PowerDomainError(ValueError):
    pass


@dataclass(frozen=True)
class PowerBreakdown:
    total_w: float
    mbs_w: float
    haps_w: float
    sbs_w: tuple[float, ...]
    grid_w: float


def bs_power_w(profile: BsProfile, load: float, is_on: bool = True, always_on: bool = False) -> float:
    """Instantaneous power draw of one station.

    Active stations draw ``P_O + eta * load * P_T``; sleeping ones draw
    ``P_S``.  ``always_on`` stations (MBS, HAPS) have no sleep state.
    """
    if not 0.0 <= load <= 1.0:
        raise PowerDomainError(f"load {load} outside [0, 1]")
    if is_on or always_on:
        return profile.p_operational + profile.eta * load * profile.p_transmit
    return profile.p_sleep


def network_power(assoc, state: NetworkState) -> PowerBreakdown:
    """Total network power for a per-SBS association vector.

    MBS and HAPS loads are recomputed from ``assoc``; ``assoc`` may also be a
    ``Solution``.
    """
    if hasattr(assoc, "assoc"):
        assoc = assoc.assoc
    assoc = np.asarray(assoc)
    lm, lh = offload_loads(assoc, state)
    if lm > 1 + 1e-9 or lh > 1 + 1e-9:
        raise PowerDomainError(f"offloaded loads exceed capacity (lambda_M={lm:.6f}, lambda_H={lh:.6f})")
    lm, lh = min(lm, 1.0), min(lh, 1.0)
    mbs = bs_power_w(state.mbs_profile, lm, always_on=True)
    haps = bs_power_w(state.haps_profile, lh, always_on=True)
    sbs = tuple(bs_power_w(p, float(lam), bool(a == Assoc.STAYS_ON))
                for p, lam, a in zip(state.sbs_profiles, state.sbs_loads, assoc))
    total = math.fsum([mbs, haps, *sbs])
    return PowerBreakdown(total, mbs, haps, sbs, math.fsum([mbs, *sbs]))
