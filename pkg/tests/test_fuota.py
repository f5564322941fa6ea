import math

import pytest
from hypothesis import given, strategies as st

from fwdelta.errors import ProfileError
from fwdelta.fuota import (
    DEFAULT_PROFILE,
    LinkProfile,
    ScenarioClass,
    classify_scenario,
    compare_strategies,
    estimate_update,
    fragment_count,
    load_profile,
)


def test_fragment_count_examples():
    assert fragment_count(109_200) == 975
    assert fragment_count(1) == 1
    assert fragment_count(0) == 0
    assert fragment_count(100_000) == 893
    # ~100 KB keeps the radio busy for well over 100 minutes
    assert estimate_update(100_000).duration_s / 60.0 > 100


def test_fragment_count_with_redundancy():
    profile = LinkProfile(redundancy_fraction=0.1)
    assert fragment_count(112_000, profile) == math.ceil(112_000 * 1.1 / 112)


def test_estimate_zero_image():
    est = estimate_update(0)
    assert (est.fragments, est.duration_s, est.energy_mAh) == (0, 0.0, 0.0)


def test_estimate_duration_is_linear_in_fragments():
    est = estimate_update(109_200)
    assert est.fragments == 975
    assert est.duration_s == 975 * 7.0
    double = estimate_update(2 * 109_200)
    assert double.duration_s == 2 * est.duration_s
    assert double.energy_mAh == pytest.approx(2 * est.energy_mAh, rel=1e-12)


def test_estimate_energy_formula():
    # one fragment: 18.8 ms of reception, the rest of the 7 s listening
    est = estimate_update(100)
    listen = 7.0 - 0.0188
    expected = (6459.8 * listen + 6060.58 * 0.0188) / 3.6e6
    assert est.energy_mAh == pytest.approx(expected, rel=1e-12)


def test_energy_monotone_in_fragments():
    energies = [estimate_update(n * 112).energy_mAh for n in (1, 2, 10, 100, 1000)]
    assert all(b > a for a, b in zip(energies, energies[1:]))


def test_degenerate_profile_collapses_to_pure_listening():
    profile = LinkProfile(fragment_rx_current_uA=6459.8)
    est = estimate_update(109_200, profile)
    assert est.energy_mAh == pytest.approx(6459.8 * est.duration_s / 3.6e6, rel=1e-12)


def test_compare_strategies_basics():
    savings = compare_strategies(109_200, 109_200)
    assert savings.time_ratio == pytest.approx(1.0)
    assert savings.energy_saved_mAh == pytest.approx(0.0, abs=1e-12)

    zero = compare_strategies(109_200, 0)
    assert zero.incremental == estimate_update(0)
    assert zero.time_ratio == math.inf
    assert zero.energy_saved_mAh == pytest.approx(estimate_update(109_200).energy_mAh)

    both_zero = compare_strategies(0, 0)
    assert both_zero.time_ratio == 1.0

    assert savings.reconstruction_overhead_mAh == pytest.approx(0.0166)


def test_patch_larger_than_image_is_legal():
    savings = compare_strategies(10_000, 20_000)
    assert savings.time_ratio < 1.0
    assert savings.energy_saved_mAh < 0.0


def test_classify_thresholds():
    assert classify_scenario(400, 100_000) is ScenarioClass.NU
    assert classify_scenario(500, 100_000) is ScenarioClass.MN  # exactly 0.5%
    assert classify_scenario(5_000, 100_000) is ScenarioClass.MN
    assert classify_scenario(20_000, 100_000) is ScenarioClass.MN  # exactly 20%
    assert classify_scenario(25_000, 100_000) is ScenarioClass.MJ
    with pytest.raises(ValueError):
        classify_scenario(1, 0)
    with pytest.raises(ValueError):
        classify_scenario(-1, 10)


@given(
    st.integers(min_value=0, max_value=1 << 24),
    st.integers(min_value=1, max_value=1 << 24),
    st.integers(min_value=1, max_value=64),
)
def test_classify_scale_invariance(patch, image, k):
    assert classify_scenario(patch, image) is classify_scenario(k * patch, k * image)


def test_profile_validation():
    with pytest.raises(ProfileError):
        LinkProfile(payload_bytes_per_fragment=0)
    with pytest.raises(ProfileError):
        LinkProfile(downlink_interval_s=0)
    with pytest.raises(ProfileError):
        LinkProfile(redundancy_fraction=-0.1)


def test_load_profile(tmp_path):
    cfg = tmp_path / "link.cfg"
    cfg.write_text(
        "# custom deployment\n"
        "payload_bytes_per_fragment = 48\n"
        "downlink_interval_s = 6.79\n"
        "spreading_factor = 12\n"
        "\n"
    )
    profile = load_profile(cfg)
    assert profile.payload_bytes_per_fragment == 48
    assert profile.downlink_interval_s == 6.79
    assert profile.spreading_factor == 12
    assert profile.class_c_current_uA == DEFAULT_PROFILE.class_c_current_uA


def test_load_profile_rejects_unknown_key_and_bad_value(tmp_path):
    bad_key = tmp_path / "bad_key.cfg"
    bad_key.write_text("not_a_field = 1\n")
    with pytest.raises(ProfileError):
        load_profile(bad_key)
    bad_value = tmp_path / "bad_value.cfg"
    bad_value.write_text("downlink_interval_s = often\n")
    with pytest.raises(ProfileError):
        load_profile(bad_value)
    bad_line = tmp_path / "bad_line.cfg"
    bad_line.write_text("downlink_interval_s\n")
    with pytest.raises(ProfileError):
        load_profile(bad_line)


def test_profile_rejects_rx_window_longer_than_interval():
    with pytest.raises(ProfileError):
        LinkProfile(downlink_interval_s=0.01, fragment_rx_time_ms=18.8)
