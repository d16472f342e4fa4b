import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hapscs.metrics import MetricsDomainError, MetricsRecord, energy_efficiency, make_record, served_traffic_with_qos
from hapscs.optimizer import haps_enhanced_cs
from hapscs.scenario import TABLE_PROFILES, case_study_preset, with_overrides
from hapscs.state import NetworkState, build_state, make_solution
from hapscs.strategies import STRATEGY_IDS, all_on, run_strategy

from oracles import random_state

MICRO = TABLE_PROFILES["micro"]


def test_all_on_traffic():
    st_ = NetworkState(0, np.array([0.2, 0.6]), np.ones(2), np.ones(2), (MICRO, MICRO), TABLE_PROFILES["macro"],
                       TABLE_PROFILES["haps"], lambda_m0=0.25, lambda_h0=0.5)
    t = served_traffic_with_qos(all_on(st_), st_)
    assert t == pytest.approx(20 * 0.25 + 40 * 0.5 + 5 * 0.2 + 5 * 0.6)


def test_outaged_offload_excluded():
    st_ = NetworkState(0, np.array([0.2, 0.6]), np.array([1e-12, 1.0]), np.ones(2), (MICRO, MICRO),
                       TABLE_PROFILES["macro"], TABLE_PROFILES["haps"])
    sol = make_solution([1, 0], st_)
    assert served_traffic_with_qos(sol, st_) == pytest.approx(5 * 0.6)


def test_custom_capacities():
    st_ = NetworkState(0, np.array([0.5]), np.ones(1), np.ones(1), (MICRO,), TABLE_PROFILES["macro"],
                       TABLE_PROFILES["haps"])
    assert served_traffic_with_qos(all_on(st_), st_, layout_capacities=[8.0]) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        served_traffic_with_qos(all_on(st_), st_, layout_capacities=[8.0, 1.0])


def test_energy_efficiency():
    assert energy_efficiency(0.0, 500.0) == 0.0
    assert energy_efficiency(20.0, 400.0) == 2 * energy_efficiency(10.0, 400.0)
    with pytest.raises(MetricsDomainError):
        energy_efficiency(1.0, 0.0)


def test_negative_traffic_rejected():
    with pytest.raises(MetricsDomainError):
        MetricsRecord("all_on", 0, 0.5, -70.0, 1.0, 1.0, -1.0, 0.0, 0, 0.0, 0)


def test_record_fields():
    cfg = with_overrides(case_study_preset("A"), alpha=0.4, rng_seed=2)
    st_ = build_state(cfg)
    sol = haps_enhanced_cs(st_)
    rec = make_record("haps_cs", sol, st_, alpha=0.4, p_min_dbm=-70.0, seed=2)
    assert rec.columns()[0] == "strategy" and len(rec.as_dict()) == len(rec.columns())
    assert rec.energy_efficiency == pytest.approx(rec.served_traffic_qos / rec.total_power_w)
    grid = make_record("haps_cs", sol, st_, alpha=0.4, p_min_dbm=-70.0, seed=2, use_grid_power=True)
    assert grid.energy_efficiency == pytest.approx(rec.served_traffic_qos / rec.grid_power_w)
    assert rec.num_off + int(np.sum(sol.delta)) == 49


@given(alpha=st.floats(0.05, 1.0), seed=st.integers(0, 500), pmin=st.floats(-100.0, -45.0))
def test_qos_solution_serves_all_traffic(alpha, seed, pmin):
    st_ = build_state(with_overrides(case_study_preset("B"), alpha=alpha, rng_seed=seed, p_min_dbm=pmin))
    t_all = served_traffic_with_qos(all_on(st_), st_)
    assert served_traffic_with_qos(haps_enhanced_cs(st_), st_) == t_all


@given(seed=st.integers(0, 100_000), n=st.integers(1, 9))
def test_traffic_accounting_bounded(seed, n):
    st_ = random_state(np.random.default_rng(seed), n)
    t_all = served_traffic_with_qos(all_on(st_), st_)
    for s in STRATEGY_IDS:
        sol = run_strategy(s, st_)
        t = served_traffic_with_qos(sol, st_)
        assert 0 <= t <= t_all + 1e-9
        # offloaded traffic counted at the SBS term fits in the targets' spare capacity
        cap = np.array([p.capacity for p in st_.sbs_profiles])
        moved = math.fsum((cap * st_.sbs_loads)[sol.assoc != 0])
        spare = (1 - st_.lambda_m0) * st_.mbs_profile.capacity + (1 - st_.lambda_h0) * st_.haps_profile.capacity
        assert moved <= spare + 1e-9


def test_traffic_invariant_to_pmin_for_fixed_solution():
    cfg = with_overrides(case_study_preset("A"), alpha=0.5, rng_seed=1)
    sol = haps_enhanced_cs(build_state(with_overrides(cfg, p_min_dbm=-55.0)))
    values = {served_traffic_with_qos(sol, build_state(with_overrides(cfg, p_min_dbm=p))) for p in (-85.0, -70.0, -55.0)}
    assert len(values) == 1
