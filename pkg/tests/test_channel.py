import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hapscs import channel as ch
from hapscs.scenario import SPEED_OF_LIGHT, case_study_preset, with_overrides


def test_los_probability_terrestrial_examples():
    assert ch.los_probability_terrestrial(18.0) == 1.0
    assert ch.los_probability_terrestrial(10.0) == 1.0
    assert ch.los_probability_terrestrial(63.0) == pytest.approx(18 / 63 + math.exp(-1) * (1 - 18 / 63), abs=1e-12)
    assert ch.los_probability_terrestrial(63.0) == pytest.approx(0.5484, abs=1e-4)


def test_breakpoint_distance():
    assert ch.breakpoint_distance(25, 1.5, 1, 2.5) == pytest.approx(4 * 24 * 0.5 * 2.5e9 / SPEED_OF_LIGHT)
    assert ch.breakpoint_distance(25, 1.5, 1, 2.5) == pytest.approx(400.28, abs=1e-2)
    assert ch.breakpoint_distance(25, 1.0, 1.0, 2.5) == 0.0
    assert ch.breakpoint_distance(25, 1.5, 1, 5.0) == pytest.approx(2 * ch.breakpoint_distance(25, 1.5, 1, 2.5))
    with pytest.raises(ch.ChannelDomainError):
        ch.breakpoint_distance(1.0, 1.5, 1.0, 2.5)


def test_los_branch_short_distance():
    los, nlos = ch.terrestrial_los_nlos_db(100.0, 100.0, 2.5, 25.0, 1.5)
    assert los == pytest.approx(28 + 44 + 20 * math.log10(2.5), abs=1e-12)
    assert los == pytest.approx(79.96, abs=5e-3)
    assert nlos >= los


def test_out_of_range_distance():
    with pytest.raises(ch.ChannelDomainError, match="10 m"):
        ch.pathloss_terrestrial(5.0, 30.0, 2.5, 25.0, 1.5)
    with pytest.raises(ch.ChannelDomainError):
        ch.pathloss_terrestrial(6000.0, 6000.0, 2.5, 25.0, 1.5)


def test_breakpoint_continuity_pinned():
    d_b = ch.breakpoint_distance(25.0, 1.5, 1.0, 2.5)
    lo = ch.terrestrial_los_nlos_db(d_b - 1e-6, math.hypot(d_b, 23.5), 2.5, 25.0, 1.5)[0]
    hi = ch.terrestrial_los_nlos_db(d_b + 1e-6, math.hypot(d_b, 23.5), 2.5, 25.0, 1.5)[0]
    # with d3d held at the breakpoint geometry the two branches coincide
    assert hi - lo == pytest.approx(0.0, abs=1e-9)
    assert lo == pytest.approx(28 + 22 * math.log10(math.hypot(d_b, 23.5)) + 20 * math.log10(2.5), abs=1e-9)


def test_elevation_examples():
    assert ch.elevation_angle_deg(0, 20000) == 90.0
    assert ch.elevation_angle_deg(20000, 20000) == pytest.approx(45.0)
    assert ch.elevation_angle_deg(1414.2, 20000) == pytest.approx(math.degrees(math.atan(20000 / 1414.2)))
    assert ch.elevation_angle_deg(1414.2, 20000) == pytest.approx(85.96, abs=1e-2)


def test_los_probability_haps_examples():
    assert ch.los_probability_haps(90.0) == 1.0
    assert ch.los_probability_haps(1e-9) == 0.0
    assert ch.los_probability_haps(30.0) == pytest.approx((9.668 * 30**0.547 - 10.58) / 100, abs=1e-12)
    assert ch.los_probability_haps(30.0) == pytest.approx(0.5152, abs=1e-3)


def _slant_by_cosine_law(theta_deg, re, hz):
    # solve d^2 + 2 d re sin(theta) - (hz^2 + 2 hz re) = 0 for the positive root
    b = 2 * re * math.sin(math.radians(theta_deg))
    c = -(hz**2 + 2 * hz * re)
    return (-b + math.sqrt(b * b - 4 * c)) / 2


def test_slant_distance():
    assert ch.slant_distance_m(90.0, 6_371_000.0, 20_000.0) == pytest.approx(20_000.0, abs=1e-6)
    d45 = ch.slant_distance_m(45.0, 6_371_000.0, 20_000.0)
    assert d45 == pytest.approx(_slant_by_cosine_law(45.0, 6_371_000.0, 20_000.0), rel=1e-9)
    assert d45 == pytest.approx(28_250.0, abs=20.0)


def test_fspl_golden():
    assert ch.pathloss_haps(90.0, 2.5, 6_371_000.0, 20_000.0) == pytest.approx(126.48, abs=0.01)
    d1 = ch.free_space_loss_db(2.5, 20_000.0)
    assert ch.free_space_loss_db(2.5, 40_000.0) - d1 == pytest.approx(20 * math.log10(2))


def test_haps_shadow_shift():
    base = ch.pathloss_haps(90.0, 2.5, 6_371_000.0, 20_000.0)
    assert ch.pathloss_haps(90.0, 2.5, 6_371_000.0, 20_000.0, shadow_los_db=4.0) == pytest.approx(base + 4.0)


def test_haps_share_worked_example():
    cfg = case_study_preset("A")
    share = ch.per_user_share_mw(20.0, 126.5, 43.2, 40)
    assert ch.mw_to_dbm(share) == pytest.approx(10 * math.log10(20e3) + 43.2 - 126.5 - 10 * math.log10(40), abs=1e-9)
    assert ch.mw_to_dbm(share) == pytest.approx(-56.3, abs=0.05)
    assert ch.per_user_share_mw(20.0, 126.5, 43.2, 1) == pytest.approx(20e3 * 10 ** ((43.2 - 126.5) / 10))
    assert cfg.u_max_haps == 40


def test_received_powers_deterministic():
    cfg = with_overrides(case_study_preset("A"), rng_seed=7)
    a = ch.network_received_powers(cfg, 0)
    b = ch.network_received_powers(cfg, 0)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    c = ch.network_received_powers(with_overrides(cfg, rng_seed=8), 0)
    assert not np.array_equal(a[0], c[0])


def test_shadowing_free_matches_link():
    cfg = case_study_preset("A")
    m, h = ch.offload_received_powers(3, cfg)
    assert m == ch.mbs_link(3, cfg).received_power_share_mw
    assert h == ch.haps_link(3, cfg).received_power_share_mw


def test_colocated_sbs_clamped():
    cfg = case_study_preset("A")
    before = ch.clamp_events["d2d_below_10m"]
    r = ch.mbs_link(24, cfg)
    assert ch.clamp_events["d2d_below_10m"] == before + 1
    assert r.los_probability == 1.0


@given(d=st.floats(0.0, 5000.0))
def test_terrestrial_los_probability_bounds(d):
    p = ch.los_probability_terrestrial(d)
    assert 0.0 < p <= 1.0
    if d <= 18.0:
        assert p == 1.0


@given(a=st.floats(18.0, 4999.0), b=st.floats(18.0, 4999.0))
def test_terrestrial_los_probability_decreasing(a, b):
    lo, hi = min(a, b), max(a, b)
    if hi - lo > 1e-6:
        assert ch.los_probability_terrestrial(hi) < ch.los_probability_terrestrial(lo)


@given(d1=st.floats(10.0, 5000.0), d2=st.floats(10.0, 5000.0))
def test_pathloss_monotone_within_branch(d1, d2):
    d_b = ch.breakpoint_distance(25.0, 1.5, 1.0, 2.5)
    lo, hi = sorted((d1, d2))
    if (lo <= d_b) != (hi <= d_b):
        return
    l_lo = ch.terrestrial_los_nlos_db(lo, math.hypot(lo, 23.5), 2.5, 25.0, 1.5)
    l_hi = ch.terrestrial_los_nlos_db(hi, math.hypot(hi, 23.5), 2.5, 25.0, 1.5)
    assert l_hi[0] >= l_lo[0] - 1e-9 and l_hi[1] >= l_lo[1] - 1e-9
    assert l_lo[1] >= l_lo[0]


@given(t1=st.floats(1e-3, 90.0), t2=st.floats(1e-3, 90.0))
def test_haps_geometry_monotone(t1, t2):
    lo, hi = sorted((t1, t2))
    assert ch.los_probability_haps(hi) >= ch.los_probability_haps(lo)
    assert ch.slant_distance_m(hi, 6_371_000.0, 20_000.0) <= ch.slant_distance_m(lo, 6_371_000.0, 20_000.0) + 1e-6


@given(x=st.floats(-200.0, 100.0))
def test_dbm_round_trip(x):
    assert ch.mw_to_dbm(ch.dbm_to_mw(x)) == pytest.approx(x, abs=1e-9)
