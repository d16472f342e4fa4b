import json
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hapscs.scenario import (ConfigError, TrafficComponent, TrafficModel, case_study_preset, config_from_dict,
                             generate_loads, grid_positions, load_config, with_overrides)


def write(tmp_path, obj, name="scen.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return p


def test_minimal_case_a_file(tmp_path):
    cfg = load_config(write(tmp_path, {"case_study": "A"}))
    assert cfg.layout.num_sbs == 49
    assert set(cfg.layout.sbs_classes) == {"micro"}
    assert cfg.profile("micro").capacity == 5
    assert cfg.profile("macro").capacity == 20
    assert cfg.profile("haps").capacity == 40
    assert cfg.p_min_dbm == -70.0


def test_alpha_out_of_range_rejected(tmp_path):
    with pytest.raises(ConfigError, match="alpha out of range"):
        load_config(write(tmp_path, {"case_study": "A", "traffic": {"kind": "gaussian", "alpha": 1.5}}))


def test_case_b_mix(tmp_path):
    cfg = load_config(write(tmp_path, {"case_study": "B"}))
    counts = {c: cfg.layout.sbs_classes.count(c) for c in set(cfg.layout.sbs_classes)}
    assert counts == {"micro": 13, "rrh": 12, "pico": 12, "femto": 12}


def test_unknown_key_rejected(tmp_path):
    with pytest.raises(ConfigError, match="unknown key"):
        load_config(write(tmp_path, {"case_study": "A", "colour": "blue"}))


def test_unknown_profile_key_rejected():
    with pytest.raises(ConfigError, match=r"profiles\[0\]"):
        config_from_dict({"case_study": "B", "profiles": [{"class_name": "pico", "watts": 3}]})


def test_parse_error_has_line_context(tmp_path):
    with pytest.raises(ConfigError, match=r":2:"):
        load_config(write(tmp_path, '{"case_study": "A",\n  "num_sbs": ,\n}'))


def test_profile_override_field_by_field():
    cfg = config_from_dict({"case_study": "B", "profiles": [{"class_name": "pico", "p_sleep": 1.0}]})
    assert cfg.profile("pico").p_sleep == 1.0
    assert cfg.profile("pico").p_operational == 6.8


def test_invalid_profile_rejected():
    with pytest.raises(ConfigError, match="p_sleep"):
        config_from_dict({"case_study": "B", "profiles": [{"class_name": "micro", "p_sleep": 100.0}]})


def test_non_square_grid_rejected():
    with pytest.raises(ConfigError, match="perfect square"):
        config_from_dict({"case_study": "A", "num_sbs": 50})


def test_preset_a_zero_sleep():
    cfg = case_study_preset("A")
    assert all(p.p_sleep == 0.0 for p in cfg.sbs_profiles)


def test_preset_b_micro_row():
    m = case_study_preset("B").profile("micro")
    assert (m.eta, m.p_transmit, m.p_operational, m.p_sleep) == (2.6, 6.3, 56.0, 39.0)


def test_presets_share_geometry():
    a, b = case_study_preset("A").layout, case_study_preset("B").layout
    assert a.sbs_positions == b.sbs_positions
    assert a.mbs_position == b.mbs_position == (1000.0, 1000.0)
    assert a.haps_ground_position == (0.0, 0.0) and a.haps_altitude_m == 20_000.0
    assert a.carrier_freq_ghz == 2.5 and a.cell_radius_m == 50.0


def test_grid_pitch():
    pos = grid_positions((2000.0, 2000.0), 49)
    assert pos[0] == pytest.approx((2000 / 14, 2000 / 14))
    assert pos[24] == pytest.approx((1000.0, 1000.0))


def test_uniform_loads():
    cfg = with_overrides(case_study_preset("A"), traffic_kind="uniform", alpha=0.5)
    assert np.all(generate_loads(cfg) == 0.5)


def test_gaussian_peak_equals_alpha():
    cfg = with_overrides(case_study_preset("A"), alpha=0.7)
    loads = generate_loads(cfg)
    assert loads[24] == pytest.approx(0.7, abs=1e-12)
    assert loads.max() == loads[24]


def test_gaussian_density_ratio():
    cfg = case_study_preset("A")
    # move the mean so one SBS sits exactly 500 m away from it along x
    x0, y0 = cfg.layout.sbs_positions[24]
    traffic = TrafficModel("gaussian", 1.0, (TrafficComponent((x0 - 500.0, y0), 500.0),))
    loads = generate_loads(replace(cfg, traffic=traffic))
    assert loads[24] == pytest.approx(math.exp(-0.5), abs=1e-9)


def test_mixture_mode_normalised():
    cfg = with_overrides(case_study_preset("A"), traffic_kind="gaussian_mixture_2", alpha=0.8)
    loads = generate_loads(cfg)
    assert 0.0 <= loads.min() and loads.max() <= 0.8 + 1e-9


def test_time_trace_moves_hotspot():
    cfg = case_study_preset("A")
    trace = (((1000.0, 1000.0), 600.0), ((143.0, 143.0), 600.0))
    cfg = replace(cfg, traffic=replace(cfg.traffic, time_trace=trace), num_steps=2)
    assert np.argmax(generate_loads(cfg, 0)) == 24
    assert np.argmax(generate_loads(cfg, 1)) == 0
    with pytest.raises(IndexError):
        generate_loads(cfg, 2)


def test_weights_must_sum_to_one():
    with pytest.raises(ConfigError, match="weights"):
        TrafficModel("gaussian_mixture_2", 0.5, (TrafficComponent((0, 0), 1.0, 0.3), TrafficComponent((1, 1), 1.0, 0.3)))


@given(alpha=st.floats(0.0, 1.0), sd=st.floats(100.0, 3000.0), seed=st.integers(0, 10_000))
def test_loads_deterministic_and_bounded(alpha, sd, seed):
    cfg = case_study_preset("A")
    cfg = replace(cfg, rng_seed=seed, traffic=TrafficModel("gaussian", alpha, (TrafficComponent((1000.0, 1000.0), sd),)))
    a, b = generate_loads(cfg), generate_loads(cfg)
    assert np.array_equal(a, b)
    assert np.all((a >= 0) & (a <= 1))


@given(sd=st.floats(100.0, 3000.0), mx=st.floats(0, 2000), my=st.floats(0, 2000))
def test_gaussian_load_decreases_with_distance(sd, mx, my):
    cfg = case_study_preset("A")
    cfg = replace(cfg, traffic=TrafficModel("gaussian", 1.0, (TrafficComponent((mx, my), sd),)))
    loads = generate_loads(cfg)
    d = np.hypot(*(np.asarray(cfg.layout.sbs_positions) - (mx, my)).T)
    order = np.argsort(d, kind="stable")
    assert np.all(np.diff(loads[order]) <= 1e-12)
