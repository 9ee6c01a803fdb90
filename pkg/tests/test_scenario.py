import math

import numpy as np
import pytest

from uavrelay.scenario import (GenerationError, Instance, build_config,
                               config_from_text, config_hash, config_to_text,
                               generate_instance, instance_from_json,
                               instance_to_json, validate_instance)


def test_default_hover_point_bounds(cfg):
    # K=100 terminals, at most N=20 each
    assert cfg.m_min == 5
    assert cfg.m_max == 100


def test_beta0_matches_hand_value():
    cfg = build_config({"c_light": 3e8})
    # reference gain at 1 m: (c / (4 pi f))^2
    expected = (3e8 / (4.0 * math.pi * 2e9)) ** 2
    assert cfg.beta0 == pytest.approx(expected, rel=1e-12)
    assert cfg.beta0 == pytest.approx(1.4249e-4, rel=1e-4)


def test_sigma2_matches_hand_value(cfg):
    # -174 dBm/Hz over 1 MHz
    assert cfg.sigma2 == pytest.approx(10.0 ** -14.4, rel=1e-12)
    assert cfg.sigma2 == pytest.approx(3.981e-15, rel=1e-4)


def test_hover_power_is_blade_plus_induced(cfg):
    assert cfg.p_hover == pytest.approx(168.4842, abs=1e-6)


def test_search_box_covers_outer_square(cfg):
    assert cfg.search_lo == -750.0
    assert cfg.search_hi == 750.0


def test_ceiling_division_for_m_min():
    cfg = build_config({"K": 41, "N": 20})
    assert cfg.m_min == 3
    assert cfg.m_min * cfg.N >= cfg.K


@pytest.mark.parametrize("k,n", [(1, 1), (7, 3), (100, 20), (99, 20), (500, 20)])
def test_capacity_satisfiable_at_m_min(k, n):
    cfg = build_config({"K": k, "N": n})
    assert cfg.m_min * cfg.N >= cfg.K
    assert 1 <= cfg.m_min <= cfg.m_max


def test_invalid_geometry_rejected():
    with pytest.raises(ValueError, match="rb_inner"):
        build_config({"rb_inner": 1500.0, "rc_outer": 1500.0})
    with pytest.raises(ValueError, match="H"):
        build_config({"H": 0.0})
    with pytest.raises(ValueError, match="phi"):
        build_config({"phi": -1.0})


def test_unknown_key_rejected():
    with pytest.raises(ValueError, match="unknown config key"):
        build_config({"bandwidth": 1e6})


def test_bad_propulsion_rejected():
    with pytest.raises(ValueError, match="propulsion"):
        build_config({"propulsion.rho": -1.0})


def test_generate_is_deterministic(cfg):
    a = generate_instance(cfg, 123)
    b = generate_instance(cfg, 123)
    assert a == b
    c = generate_instance(cfg, 124)
    assert not np.array_equal(a.ues, c.ues)


def test_generated_points_live_in_annulus(cfg):
    inst = generate_instance(cfg, 9)
    chebyshev = np.max(np.abs(inst.ues), axis=1)
    assert np.all(chebyshev > cfg.rb_inner / 2.0)
    assert np.all(chebyshev <= cfg.rc_outer / 2.0)
    assert np.all(inst.demands_bits >= cfg.d_min_bits)
    assert np.all(inst.demands_bits <= cfg.d_max_bits)


def test_annulus_quadrants_are_uniform():
    cfg = build_config({"K": 10_000})
    inst = generate_instance(cfg, 4)
    frac = np.mean((inst.ues[:, 0] > 0) & (inst.ues[:, 1] > 0))
    assert abs(frac - 0.25) < 0.02


def test_empty_instance():
    cfg = build_config({"K": 0})
    inst = generate_instance(cfg, 0)
    assert inst.k == 0
    assert inst.ues.shape == (0, 2)
    assert inst.demands_bits.shape == (0,)


def test_rejection_cap_reports_generation_error():
    # an annulus that is (numerically) all hole: every draw rejected
    cfg = build_config({"K": 1, "rb_inner": 1500.0 - 1e-9, "rc_outer": 1500.0})
    with pytest.raises(GenerationError):
        generate_instance(cfg, 0)


def test_instance_round_trip(cfg):
    inst = generate_instance(cfg, 77)
    again = instance_from_json(instance_to_json(inst), cfg)
    assert inst == again


def test_instance_missing_field():
    with pytest.raises(ValueError, match="demands_bits"):
        instance_from_json('{"seed": 1, "config_hash": "x", "ues": []}')


def test_instance_unknown_field():
    with pytest.raises(ValueError, match="unknown key"):
        instance_from_json('{"seed": 1, "config_hash": "x", "ues": [], '
                           '"demands_bits": [], "extra": 1}')


def test_instance_parse_error_reports_position():
    with pytest.raises(ValueError, match="line"):
        instance_from_json("{\n  broken\n}")


def test_hand_written_two_terminal_document():
    text = """{
      "seed": 3,
      "config_hash": "deadbeef",
      "ues": [[400.0, 100.0], [-500.0, -600.0]],
      "demands_bits": [8e6, 1.6e7]
    }"""
    inst = instance_from_json(text)
    assert inst.k == 2
    assert inst.ues[1, 1] == -600.0
    assert inst.demands_bits[0] == 8e6


def test_validate_against_wrong_config(cfg):
    inst = generate_instance(cfg, 5)
    other = build_config({"N": 10})
    with pytest.raises(ValueError, match="config_hash"):
        validate_instance(inst, other)


def test_config_text_round_trip(cfg):
    again = config_from_text(config_to_text(cfg))
    assert again == cfg
    assert config_hash(again) == config_hash(cfg)


def test_config_text_rejects_unknown_key(cfg):
    text = config_to_text(cfg) + "mystery=1\n"
    with pytest.raises(ValueError, match="mystery"):
        config_from_text(text)


def test_config_text_rejects_duplicate_key(cfg):
    text = config_to_text(cfg) + "K=5\n"
    with pytest.raises(ValueError, match="duplicate"):
        config_from_text(text)


def test_coordinates_survive_serialization_exactly(cfg):
    inst = generate_instance(cfg, 11)
    again = instance_from_json(instance_to_json(inst))
    assert np.array_equal(inst.ues, again.ues)
    assert np.array_equal(inst.demands_bits, again.demands_bits)
