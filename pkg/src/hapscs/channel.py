"""Terrestrial UMa and HAPS (TR 38.811) link budgets.

All logarithms are base 10, distances in metres unless a name says otherwise,
and LoS/NLoS losses are combined as a probability-weighted average of dB values.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .scenario import SPEED_OF_LIGHT, ScenarioConfig

log = logging.getLogger(__name__)

HAPS_LOS_PARAMS = (9.668, 0.547, -10.58)  # dense urban a, b, c (percent)
MIN_D2D_M = 10.0
MAX_D2D_M = 5000.0
UE_GAIN_DBI = 0.0

clamp_events: Counter = Counter()


class ChannelDomainError(ValueError):
    pass


@dataclass(frozen=True)
class LinkBudgetResult:
    pathloss_db: float
    los_probability: float
    received_power_dbm: float
    received_power_share_mw: float


def dbm_to_mw(dbm):
    return 10.0 ** (np.asarray(dbm, dtype=float) / 10.0) if np.ndim(dbm) else 10.0 ** (dbm / 10.0)


def mw_to_dbm(mw):
    if np.ndim(mw):
        return 10.0 * np.log10(np.asarray(mw, dtype=float))
    return 10.0 * math.log10(mw) if mw > 0 else -math.inf


def watts_to_dbm(w: float) -> float:
    return mw_to_dbm(w * 1e3)


# ---------------------------------------------------------------------------
# terrestrial (UMa)


def los_probability_terrestrial(d2d_m: float) -> float:
    if d2d_m < 0:
        raise ChannelDomainError("d2d_m must be >= 0")
    if d2d_m <= 18.0:
        return 1.0
    return 18.0 / d2d_m + math.exp(-d2d_m / 63.0) * (1.0 - 18.0 / d2d_m)


def breakpoint_distance(h_b_m: float, h_u_m: float, h_e_m: float, fc_ghz: float) -> float:
    if not (h_b_m > h_e_m and h_u_m >= h_e_m):
        raise ChannelDomainError("breakpoint distance needs h_b > h_e and h_u >= h_e")
    return 4.0 * (h_b_m - h_e_m) * (h_u_m - h_e_m) * fc_ghz * 1e9 / SPEED_OF_LIGHT


def terrestrial_los_nlos_db(d2d_m, d3d_m, fc_ghz, h_b_m, h_u_m, h_e_m=1.0,
                            shadow_los_db=0.0, shadow_nlos_db=0.0) -> tuple[float, float]:
    """(L^L, L^N) in dB including shadowing draws."""
    if not MIN_D2D_M <= d2d_m <= MAX_D2D_M:
        raise ChannelDomainError(f"d2d={d2d_m} m outside the UMa validity range [10 m, 5 km]")
    if d3d_m < d2d_m:
        raise ChannelDomainError("d3d must be >= d2d")
    d_b = breakpoint_distance(h_b_m, h_u_m, h_e_m, fc_ghz)
    f_term = 20.0 * math.log10(fc_ghz)
    if d2d_m <= d_b:
        los = 28.0 + 22.0 * math.log10(d3d_m) + f_term
    else:
        los = (28.0 + 40.0 * math.log10(d3d_m) + f_term
               - 9.0 * math.log10(d_b**2 + (h_b_m - h_u_m) ** 2))
    los += shadow_los_db
    nlos_hat = 13.54 + 39.08 * math.log10(d3d_m) + f_term - 0.6 * (h_u_m - 1.5) + shadow_nlos_db
    return los, max(los, nlos_hat)


def pathloss_terrestrial(d2d_m, d3d_m, fc_ghz, h_b_m, h_u_m, h_e_m=1.0,
                         shadow_los_db=0.0, shadow_nlos_db=0.0) -> float:
    los, nlos = terrestrial_los_nlos_db(d2d_m, d3d_m, fc_ghz, h_b_m, h_u_m, h_e_m,
                                        shadow_los_db, shadow_nlos_db)
    p = los_probability_terrestrial(d2d_m)
    return p * los + (1.0 - p) * nlos


# ---------------------------------------------------------------------------
# HAPS


def elevation_angle_deg(ground_distance_m: float, altitude_m: float) -> float:
    if altitude_m <= 0:
        raise ChannelDomainError("altitude must be > 0")
    return math.degrees(math.atan2(altitude_m, ground_distance_m))


def los_probability_haps(theta_deg: float) -> float:
    if not 0 < theta_deg <= 90:
        raise ChannelDomainError("elevation angle must lie in (0, 90]")
    a, b, c = HAPS_LOS_PARAMS
    return min(1.0, max(0.0, (a * theta_deg**b + c) / 100.0))


def slant_distance_m(theta_deg: float, earth_radius_m: float, altitude_m: float) -> float:
    if not 0 < theta_deg <= 90:
        raise ChannelDomainError("elevation angle must lie in (0, 90]")
    s = math.sin(math.radians(theta_deg))
    re, hz = earth_radius_m, altitude_m
    return math.sqrt(re**2 * s**2 + hz**2 + 2 * hz * re) - re * s


def free_space_loss_db(fc_ghz: float, d3d_m: float) -> float:
    # f in MHz, d in km with the 32.45 ~ 32.5 dB constant
    return 32.5 + 20.0 * math.log10(fc_ghz * 1e3) + 20.0 * math.log10(d3d_m / 1e3)


def pathloss_haps(theta_deg, fc_ghz, earth_radius_m, altitude_m,
                  shadow_los_db=0.0, shadow_nlos_db=0.0) -> float:
    d3d = slant_distance_m(theta_deg, earth_radius_m, altitude_m)
    lf = free_space_loss_db(fc_ghz, d3d)
    p = los_probability_haps(theta_deg)
    return p * (lf + shadow_los_db) + (1.0 - p) * (lf + shadow_nlos_db)


# ---------------------------------------------------------------------------
# offload link budgets


def per_user_share_mw(p_transmit_w: float, pathloss_db: float, gain_tx_dbi: float, users: int,
                      gain_rx_dbi: float = UE_GAIN_DBI) -> float:
    eff = pathloss_db - gain_tx_dbi - gain_rx_dbi
    return p_transmit_w * 1e3 / (users * 10.0 ** (eff / 10.0))


def _shadow(rng, config: ScenarioConfig) -> tuple[float, float]:
    if rng is None:
        return 0.0, 0.0
    return (float(rng.normal(0.0, config.sigma_los_db)), float(rng.normal(0.0, config.sigma_nlos_db)))


def mbs_link(sbs_index: int, config: ScenarioConfig, rng=None) -> LinkBudgetResult:
    layout = config.layout
    mbs = config.profile("macro")
    x, y = layout.sbs_positions[sbs_index]
    d2d = math.hypot(x - layout.mbs_position[0], y - layout.mbs_position[1])
    if d2d < MIN_D2D_M:
        clamp_events["d2d_below_10m"] += 1
        log.debug("SBS %d: d2d %.2f m clamped to %.0f m", sbs_index, d2d, MIN_D2D_M)
        d2d = MIN_D2D_M
    d3d = math.hypot(d2d, mbs.height_m - layout.ue_height_m)
    xl, xn = _shadow(rng, config)
    loss = pathloss_terrestrial(d2d, d3d, layout.carrier_freq_ghz, mbs.height_m, layout.ue_height_m,
                                layout.env_height_m, xl, xn)
    pr_dbm = watts_to_dbm(mbs.p_transmit) + mbs.antenna_gain_dbi + UE_GAIN_DBI - loss
    share = per_user_share_mw(mbs.p_transmit, loss, mbs.antenna_gain_dbi, config.u_max_mbs)
    return LinkBudgetResult(loss, los_probability_terrestrial(d2d), pr_dbm, share)


def haps_link(sbs_index: int, config: ScenarioConfig, rng=None) -> LinkBudgetResult:
    layout = config.layout
    haps = config.profile("haps")
    x, y = layout.sbs_positions[sbs_index]
    ground = math.hypot(x - layout.haps_ground_position[0], y - layout.haps_ground_position[1])
    theta = elevation_angle_deg(ground, layout.haps_altitude_m)
    xl, xn = _shadow(rng, config)
    loss = pathloss_haps(theta, layout.carrier_freq_ghz, layout.earth_radius_m, layout.haps_altitude_m, xl, xn)
    pr_dbm = watts_to_dbm(haps.p_transmit) + haps.antenna_gain_dbi + UE_GAIN_DBI - loss
    share = per_user_share_mw(haps.p_transmit, loss, haps.antenna_gain_dbi, config.u_max_haps)
    return LinkBudgetResult(loss, los_probability_haps(theta), pr_dbm, share)


def offload_received_powers(sbs_index: int, config: ScenarioConfig, rng=None) -> tuple[float, float]:
    """Per-user received-power shares (mW) from the MBS and the HAPS for one SBS group.

    The group is evaluated at the SBS centre.  Four shadowing draws are taken
    from ``rng`` in the order MBS-LoS, MBS-NLoS, HAPS-LoS, HAPS-NLoS; pass
    ``rng=None`` for a shadowing-free evaluation.
    """
    return (mbs_link(sbs_index, config, rng).received_power_share_mw,
            haps_link(sbs_index, config, rng).received_power_share_mw)


def step_rng(seed: int, step: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, step]))


def network_received_powers(config: ScenarioConfig, step: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Offload received powers for every SBS at one step, seeded by (rng_seed, step)."""
    rng = step_rng(config.rng_seed, step if config.redraw_shadowing else 0)
    pairs = [offload_received_powers(j, config, rng) for j in range(config.layout.num_sbs)]
    return np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])
