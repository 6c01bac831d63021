import math
from collections import Counter

import pytest

from microbot import physics
from microbot.physics import (
    BehaviorClass,
    BodyPose,
    ElectrodeConfig,
    RobotParams,
    Twist,
    UniformField,
    WarmingBathField,
    LinearGradientField,
    classify,
    clock_period,
    dequantize_temperature,
    integrate,
    quantize_temperature,
    sense_temperature,
    twist_of,
)


def all_enabled(polarity: int) -> ElectrodeConfig:
    return ElectrodeConfig(0xF, polarity)


# ---------------------------------------------------------------------------
# Behavior classes


def test_census_over_all_16_polarity_states():
    counts = Counter(classify(all_enabled(p)) for p in range(16))
    assert counts[BehaviorClass.IDLE] == 2
    assert counts[BehaviorClass.MAJOR_TRANSLATION] == 2
    assert counts[BehaviorClass.MINOR_TRANSLATION] == 2
    assert counts[BehaviorClass.ROTATION] == 2
    assert counts[BehaviorClass.ARC] == 8


def test_classify_examples():
    assert classify(all_enabled(0xF)) is BehaviorClass.IDLE
    assert classify(all_enabled(0x0)) is BehaviorClass.IDLE
    # Front pair positive (FL, FR = bits 0, 1), rear negative.
    assert classify(all_enabled(0b0011)) is BehaviorClass.MAJOR_TRANSLATION
    assert classify(all_enabled(0b0001)) is BehaviorClass.ARC  # FL only
    assert classify(all_enabled(0b0110)) is BehaviorClass.ROTATION
    assert classify(all_enabled(0b0101)) is BehaviorClass.MINOR_TRANSLATION


def test_disabled_electrodes_do_not_count_as_positive():
    # FR positive but disabled: nothing drives.
    cfg = ElectrodeConfig(enable=0b1101, polarity=0b0010)
    assert cfg.positives == 0
    assert classify(cfg) is BehaviorClass.IDLE
    assert twist_of(cfg, RobotParams()) == Twist()


def test_config_byte_round_trip():
    cfg = ElectrodeConfig(0xF, 0x6)
    assert ElectrodeConfig.from_byte(cfg.to_byte()) == cfg
    assert cfg.to_byte() == 0xF6


# ---------------------------------------------------------------------------
# Twist table


def test_idle_twist_is_exactly_zero():
    params = RobotParams(rng_seed=9)
    for polarity in (0x0, 0xF):
        twist = twist_of(all_enabled(polarity), params)
        assert twist == Twist(0.0, 0.0, 0.0)


def test_major_translation_pair_equal_and_opposite():
    params = RobotParams(rng_seed=4)
    fwd = twist_of(all_enabled(0b0011), params)
    rev = twist_of(all_enabled(0b1100), params)
    assert fwd.v_forward > 0 and rev.v_forward == -fwd.v_forward
    assert fwd.v_lateral == rev.v_lateral == 0
    assert fwd.omega == rev.omega == 0


def test_rotation_pair_opposite_sign_equal_magnitude():
    params = RobotParams(rng_seed=4)
    ccw = twist_of(all_enabled(0b0110), params)
    cw = twist_of(all_enabled(0b1001), params)
    assert ccw.omega > 0 and cw.omega == -ccw.omega
    assert 0.1 <= abs(ccw.omega) <= 0.3
    assert ccw.v_forward == ccw.v_lateral == 0


def test_speed_ranges_over_1000_seeded_robots():
    for seed in range(1000):
        params = RobotParams(rng_seed=seed)
        for polarity in range(16):
            twist = twist_of(all_enabled(polarity), params)
            behavior = classify(all_enabled(polarity))
            if behavior is BehaviorClass.IDLE:
                assert twist.speed == 0
            elif behavior is BehaviorClass.ROTATION:
                assert 0.1 <= abs(twist.omega) <= 0.3
                assert twist.speed == 0
            elif behavior is BehaviorClass.ARC:
                assert 3.0 <= twist.speed <= 5.0
                assert 0.1 <= abs(twist.omega) <= 0.3
            else:
                assert 3.0 <= twist.speed <= 5.0
                assert twist.omega == 0


def rot180(p: int) -> int:
    # FL<->RR, FR<->RL
    return ((p & 1) << 3) | ((p & 2) << 1) | ((p & 4) >> 1) | ((p & 8) >> 3)


def reflect_lr(p: int) -> int:
    # FL<->FR, RL<->RR
    return ((p & 0b0101) << 1) | ((p & 0b1010) >> 1)


def test_symmetry_rotation_180_exact():
    params = RobotParams(rng_seed=77)
    for p in range(16):
        a = twist_of(all_enabled(p), params)
        b = twist_of(all_enabled(rot180(p)), params)
        assert b.v_forward == -a.v_forward
        assert b.v_lateral == -a.v_lateral
        assert b.omega == a.omega


def test_symmetry_left_right_reflection_exact():
    params = RobotParams(rng_seed=77)
    for p in range(16):
        a = twist_of(all_enabled(p), params)
        b = twist_of(all_enabled(reflect_lr(p)), params)
        assert b.v_forward == a.v_forward
        assert b.v_lateral == -a.v_lateral
        assert b.omega == -a.omega


def test_parity_three_positive_at_least_as_fast():
    for seed in range(50):
        params = RobotParams(rng_seed=seed)
        for single in (1, 2, 4, 8):
            one = twist_of(all_enabled(single), params)
            three = twist_of(all_enabled(single ^ 0xF), params)
            assert three.speed >= one.speed
            assert abs(three.omega) >= abs(one.omega)
            # and the mirror reverses direction
            assert math.copysign(1, three.omega) == -math.copysign(1, one.omega)


def test_mobility_scales_translation_only():
    fast = RobotParams(rng_seed=3, mobility_scale=20.0)
    slow = RobotParams(rng_seed=3, mobility_scale=1.0)
    cfg = all_enabled(0b0011)
    assert twist_of(cfg, fast).v_forward == 20.0 * twist_of(cfg, slow).v_forward
    arc = all_enabled(0b0001)
    assert twist_of(arc, fast).omega == twist_of(arc, slow).omega


def test_device_scale_is_stable_across_calls():
    params = RobotParams(rng_seed=123)
    cfg = all_enabled(0b0011)
    assert twist_of(cfg, params) == twist_of(cfg, params)


# ---------------------------------------------------------------------------
# Pose integration


def test_zero_twist_keeps_pose():
    pose = BodyPose(5.0, -3.0, 42.0)
    out = integrate(pose, Twist(), 60.0)
    assert (out.x, out.y, out.theta) == (5.0, -3.0, 42.0)


def test_straight_line():
    out = integrate(BodyPose(0, 0, 0), Twist(v_forward=4.0), 60.0)
    assert out.x == pytest.approx(240.0, abs=1e-9)
    assert out.y == pytest.approx(0.0, abs=1e-9)


def test_heading_rotates_velocity():
    out = integrate(BodyPose(0, 0, 90.0), Twist(v_forward=2.0), 10.0)
    assert out.x == pytest.approx(0.0, abs=1e-9)
    assert out.y == pytest.approx(20.0, abs=1e-9)


def test_full_circle_closes():
    pose = BodyPose(10.0, 20.0, 30.0)
    out = integrate(pose, Twist(v_forward=4.0, omega=0.2), 1800.0)
    # 0.2 deg/s * 1800 s = 360 degrees: back to start, radius ~1146 um.
    assert out.theta == pytest.approx(30.0, abs=1e-9)
    assert out.x == pytest.approx(10.0, rel=1e-9, abs=1e-6)
    assert out.y == pytest.approx(20.0, rel=1e-9, abs=1e-6)


def test_composition_matches_single_step():
    twist = Twist(v_forward=3.4, v_lateral=-1.2, omega=0.17)
    pose_a = BodyPose(0, 0, 13.0)
    for _ in range(100):
        pose_a = integrate(pose_a, twist, 7.3)
    pose_b = integrate(BodyPose(0, 0, 13.0), twist, 730.0)
    assert pose_a.x == pytest.approx(pose_b.x, rel=1e-9)
    assert pose_a.y == pytest.approx(pose_b.y, rel=1e-9)
    assert pose_a.theta == pytest.approx(pose_b.theta, rel=1e-9)


def test_theta_normalized():
    out = integrate(BodyPose(0, 0, 359.0), Twist(omega=0.5), 10.0)
    assert 0 <= out.theta < 360
    with pytest.raises(ValueError):
        integrate(BodyPose(), Twist(), 0.0)


# ---------------------------------------------------------------------------
# Temperature sensing


def test_quantizer_pins():
    assert quantize_temperature(25.0) == 75
    assert quantize_temperature(10.0) == 0
    assert quantize_temperature(61.0) == 255
    assert quantize_temperature(5.0) == 0  # clamped
    assert quantize_temperature(99.0) == 255
    assert dequantize_temperature(75) == pytest.approx(25.0)


def test_sense_noise_free_is_exact():
    field = UniformField(25.0)
    sample = sense_temperature(field, BodyPose(), 3.0, RobotParams(noise_c=0.0))
    assert sample.code == 75
    assert sample.measured_c == sample.true_c == 25.0


def test_sense_is_deterministic_in_pose_time_seed():
    field = UniformField(20.0)
    params = RobotParams(rng_seed=5)
    a = sense_temperature(field, BodyPose(), 12.25, params)
    b = sense_temperature(field, BodyPose(), 12.25, params)
    assert a == b
    c = sense_temperature(field, BodyPose(), 12.5, params)
    assert c.code in range(256)


def test_sensor_error_budget():
    params = RobotParams(rng_seed=31)
    for i in range(2000):
        t_c = 10.2 + (60.8 - 10.2) * i / 1999
        sample = sense_temperature(UniformField(t_c), BodyPose(), float(i), params)
        assert abs(sample.measured_c - sample.true_c) <= 0.24
        assert abs(dequantize_temperature(sample.code) - sample.true_c) <= 0.34 + 1e-12


def test_fields():
    assert UniformField(25.0).evaluate(1e6, -1e6, 1e6) == 25.0
    bath = WarmingBathField(10.0, 25.0, 300.0)
    assert bath.evaluate(0, 0, 0) == pytest.approx(10.0)
    assert bath.evaluate(0, 0, 1e9) == pytest.approx(25.0)
    assert bath.evaluate(0, 0, 300.0) == pytest.approx(25.0 - 15.0 / math.e)
    grad = LinearGradientField(30.0, (0.1, 0.0), (0.0, 0.0), sign=1)
    assert grad.evaluate(10_000, 0, 0) == pytest.approx(31.0)
    grad.sign = -1
    assert grad.evaluate(10_000, 0, 0) == pytest.approx(29.0)
    assert grad.warm_axis() == (-1.0, 0.0)


# ---------------------------------------------------------------------------
# Clock model


def test_clock_anchor_points():
    assert clock_period(10.0) == pytest.approx(60.0)
    assert clock_period(25.0) == pytest.approx(30.0)
    assert clock_period(40.0) == pytest.approx(20.0)


def test_clock_interpolates_between_anchors():
    assert clock_period(17.5) == pytest.approx(45.0)
    assert clock_period(32.5) == pytest.approx(25.0)


def test_clock_clamps_to_validity_band():
    assert clock_period(-40.0) == clock_period(0.0)
    assert clock_period(90.0) == clock_period(50.0)
    assert clock_period(0.0) == pytest.approx(80.0)  # linear extension below 10


def test_instruction_period_scales_with_loop_length():
    assert physics.instruction_period(25.0, 398) == pytest.approx(30.0 / 398)
