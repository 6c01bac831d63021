"""2D kinematics, thermal environment, temperature sensor, and clock model.

Locomotion model: the robot is a rectangle with platinum electrodes at its
four corners, ordered FL, FR, RL, RR (mask bits 0..3). Body frame: +x is
forward along the major axis, +y is left along the minor axis, headings are
counter-clockwise degrees. Electrokinetic flow moves the robot at a speed
proportional to the driving field, so the observable kinematics reduce to a
per-configuration twist table calibrated to measured speed envelopes:
translations 3-5 um/s, rotations 0.1-0.3 deg/s.

The 16 polarity arrangements of four enabled electrodes group into five
classes by the positive-electrode pattern:

    all same polarity            -> Idle               (2 states)
    front or rear pair positive  -> MajorTranslation   (2)
    left or right pair positive  -> MinorTranslation   (2)
    diagonal pair positive       -> Rotation           (2)
    one or three positive        -> Arc                (8)

Reversing every polarity reverses the twist; states with three positive
electrodes run faster than their one-positive mirrors because the platinum
electrode reactions are not symmetric under bias reversal.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass

FL, FR, RL, RR = 0, 1, 2, 3
ELECTRODE_NAMES = ("FL", "FR", "RL", "RR")

# Calibrated speed envelope (measured): translations 3-5 um/s, turns 0.1-0.3 deg/s.
TRANSLATION_RANGE_UM_S = (3.0, 5.0)
ROTATION_RANGE_DEG_S = (0.1, 0.3)
TRANSLATION_NOMINAL_UM_S = 4.0
ROTATION_NOMINAL_DEG_S = 0.2
ARC_TRANSLATION_NOMINAL_UM_S = 3.0
ARC_ROTATION_NOMINAL_DEG_S = 0.15
DEVICE_SCALE_RANGE = (0.85, 1.15)
DEFAULT_PARITY_FACTOR = 1.25  # three-positive arcs vs their one-positive mirrors

# Temperature sensor: 0.2 degC per LSB starting at 10.0 degC, accuracy +-0.24.
SENSOR_ORIGIN_C = 10.0
SENSOR_LSB_C = 0.2
SENSOR_NOISE_BOUND_C = 0.24

# Body footprint (um): two build variants differing in solar cell count.
SIZE_VARIANTS = {"small": (210.0, 340.0), "large": (270.0, 340.0)}
BODY_THICKNESS_UM = 50.0


class BehaviorClass(enum.Enum):
    IDLE = "idle"
    MAJOR_TRANSLATION = "major_translation"
    MINOR_TRANSLATION = "minor_translation"
    ROTATION = "rotation"
    ARC = "arc"


@dataclass(frozen=True)
class ElectrodeConfig:
    """Enable and polarity masks over the four corner electrodes (bit i = electrode i)."""

    enable: int = 0
    polarity: int = 0

    def __post_init__(self):
        if not (0 <= self.enable <= 0xF and 0 <= self.polarity <= 0xF):
            raise ValueError(f"electrode masks must be 4-bit: {self}")

    @property
    def positives(self) -> int:
        """Mask of electrodes that are both enabled and driven positive."""
        return self.enable & self.polarity

    def to_byte(self) -> int:
        return (self.enable << 4) | self.polarity

    @classmethod
    def from_byte(cls, value: int) -> "ElectrodeConfig":
        return cls((value >> 4) & 0xF, value & 0xF)

    def with_polarity_bit(self, electrode: int, high: bool) -> "ElectrodeConfig":
        mask = 1 << electrode
        polarity = (self.polarity | mask) if high else (self.polarity & ~mask)
        return ElectrodeConfig(self.enable, polarity)


IDLE_CONFIG = ElectrodeConfig(0, 0)


@dataclass(frozen=True)
class Twist:
    """Body-frame velocity (um/s) and signed rotation rate (deg/s)."""

    v_forward: float = 0.0
    v_lateral: float = 0.0
    omega: float = 0.0

    @property
    def speed(self) -> float:
        return math.hypot(self.v_forward, self.v_lateral)


ZERO_TWIST = Twist()


@dataclass
class BodyPose:
    """World-frame position (um) and heading (deg CCW from +x, normalized to [0, 360))."""

    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        self.theta %= 360.0


@dataclass(frozen=True)
class RobotParams:
    """Per-device model parameters; all derived draws come from rng_seed."""

    size_variant: str = "small"
    type_code: int = 1
    rng_seed: int = 0
    mobility_scale: float = 1.0  # solution-dependent; scales translation speeds only
    noise_c: float = SENSOR_NOISE_BOUND_C
    parity_factor: float = DEFAULT_PARITY_FACTOR

    def __post_init__(self):
        if self.size_variant not in SIZE_VARIANTS:
            raise ValueError(f"unknown size variant {self.size_variant!r}")


# Positive-pattern masks for the two-positive classes.
_FRONT_PAIR = (1 << FL) | (1 << FR)
_REAR_PAIR = (1 << RL) | (1 << RR)
_LEFT_PAIR = (1 << FL) | (1 << RL)
_RIGHT_PAIR = (1 << FR) | (1 << RR)
_DIAG_CCW = (1 << FR) | (1 << RL)
_DIAG_CW = (1 << FL) | (1 << RR)


def classify(cfg: ElectrodeConfig) -> BehaviorClass:
    """Behavior class of a configuration, from its positive-electrode pattern."""
    positives = cfg.positives
    count = bin(positives).count("1")
    if cfg.enable == 0xF and (positives == 0xF or positives == 0):
        return BehaviorClass.IDLE
    if cfg.enable != 0xF and count in (0, 4):
        # With some electrodes disabled there is no complete drive pattern;
        # uniform polarity over the active set still produces no net motion.
        return BehaviorClass.IDLE
    if positives in (_FRONT_PAIR, _REAR_PAIR):
        return BehaviorClass.MAJOR_TRANSLATION
    if positives in (_LEFT_PAIR, _RIGHT_PAIR):
        return BehaviorClass.MINOR_TRANSLATION
    if positives in (_DIAG_CCW, _DIAG_CW):
        return BehaviorClass.ROTATION
    return BehaviorClass.ARC


_CLASS_INDEX = {
    BehaviorClass.MAJOR_TRANSLATION: 1,
    BehaviorClass.MINOR_TRANSLATION: 2,
    BehaviorClass.ROTATION: 3,
    BehaviorClass.ARC: 4,
}


def device_scale(params: RobotParams, behavior: BehaviorClass) -> float:
    """Per-(device, class) speed factor, drawn once and stable across calls."""
    if behavior is BehaviorClass.IDLE:
        return 1.0
    rng = random.Random(params.rng_seed * 1_000_003 + _CLASS_INDEX[behavior])
    return rng.uniform(*DEVICE_SCALE_RANGE)


def _clamp(value: float, lo: float, hi: float) -> float:
    return min(max(value, lo), hi)


# Sign patterns (v_forward, omega) for the one-positive arcs. A lone positive
# corner drives like a weak front/rear pair plus the half-diagonal turn: FL is
# a forward pull with the CW half-diagonal, and the others follow by symmetry.
_ARC_SIGNS = {
    1 << FL: (+1.0, -1.0),
    1 << FR: (+1.0, +1.0),
    1 << RL: (-1.0, +1.0),
    1 << RR: (-1.0, -1.0),
}


def twist_of(cfg: ElectrodeConfig, params: RobotParams) -> Twist:
    """Body-frame twist produced by an electrode configuration."""
    behavior = classify(cfg)
    if behavior is BehaviorClass.IDLE:
        return ZERO_TWIST
    scale = device_scale(params, behavior)
    mobility = params.mobility_scale
    positives = cfg.positives

    if behavior is BehaviorClass.MAJOR_TRANSLATION:
        speed = _clamp(TRANSLATION_NOMINAL_UM_S * scale, *TRANSLATION_RANGE_UM_S)
        sign = +1.0 if positives == _FRONT_PAIR else -1.0
        return Twist(sign * speed * mobility, 0.0, 0.0)

    if behavior is BehaviorClass.MINOR_TRANSLATION:
        speed = _clamp(TRANSLATION_NOMINAL_UM_S * scale, *TRANSLATION_RANGE_UM_S)
        sign = +1.0 if positives == _LEFT_PAIR else -1.0
        return Twist(0.0, sign * speed * mobility, 0.0)

    if behavior is BehaviorClass.ROTATION:
        rate = _clamp(ROTATION_NOMINAL_DEG_S * scale, *ROTATION_RANGE_DEG_S)
        sign = +1.0 if positives == _DIAG_CCW else -1.0
        return Twist(0.0, 0.0, sign * rate)

    # Arc: one or three positives. Three-positive states mirror the complement
    # one-positive state with reversed twist and a parity speed advantage.
    if bin(positives).count("1") == 1:
        key, flip, parity = positives, +1.0, 1.0
    else:
        key, flip, parity = positives ^ 0xF, -1.0, params.parity_factor
    sf, sw = _ARC_SIGNS[key]
    speed = _clamp(ARC_TRANSLATION_NOMINAL_UM_S * parity * scale, *TRANSLATION_RANGE_UM_S)
    rate = _clamp(ARC_ROTATION_NOMINAL_DEG_S * parity * scale, *ROTATION_RANGE_DEG_S)
    return Twist(flip * sf * speed * mobility, 0.0, flip * sw * rate)


def integrate(pose: BodyPose, twist: Twist, dt: float) -> BodyPose:
    """Advance a pose by a constant twist for dt seconds (exact arc geometry)."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    theta0 = math.radians(pose.theta)
    omega = math.radians(twist.omega)
    vf, vl = twist.v_forward, twist.v_lateral
    if abs(omega * dt) < 1e-12:
        c, s = math.cos(theta0), math.sin(theta0)
        dx = (c * vf - s * vl) * dt
        dy = (s * vf + c * vl) * dt
    else:
        theta1 = theta0 + omega * dt
        ds = math.sin(theta1) - math.sin(theta0)
        dc = math.cos(theta1) - math.cos(theta0)
        dx = (ds * vf + dc * vl) / omega
        dy = (-dc * vf + ds * vl) / omega
    return BodyPose(pose.x + dx, pose.y + dy, pose.theta + twist.omega * dt)


# ---------------------------------------------------------------------------
# Thermal environment


@dataclass
class UniformField:
    t0_c: float

    def evaluate(self, x_um: float, y_um: float, t_s: float) -> float:
        return self.t0_c


@dataclass
class WarmingBathField:
    """Bath starting at t0 and relaxing exponentially toward t_inf."""

    t0_c: float
    t_inf_c: float
    tau_s: float

    def evaluate(self, x_um: float, y_um: float, t_s: float) -> float:
        return self.t_inf_c + (self.t0_c - self.t_inf_c) * math.exp(-t_s / self.tau_s)


@dataclass
class LinearGradientField:
    """T = t0 + sign * grad . (p - origin); sign is switched by the scenario schedule."""

    t0_c: float
    grad_c_per_mm: tuple[float, float]
    origin_um: tuple[float, float] = (0.0, 0.0)
    sign: int = 1

    def evaluate(self, x_um: float, y_um: float, t_s: float) -> float:
        gx, gy = self.grad_c_per_mm
        dx_mm = (x_um - self.origin_um[0]) / 1000.0
        dy_mm = (y_um - self.origin_um[1]) / 1000.0
        return self.t0_c + self.sign * (gx * dx_mm + gy * dy_mm)

    def warm_axis(self) -> tuple[float, float]:
        """Unit vector pointing toward increasing temperature."""
        gx, gy = self.grad_c_per_mm
        norm = math.hypot(gx, gy)
        if norm == 0:
            return (0.0, 0.0)
        return (self.sign * gx / norm, self.sign * gy / norm)


ThermalField = UniformField | WarmingBathField | LinearGradientField


# ---------------------------------------------------------------------------
# Temperature sensor


@dataclass(frozen=True)
class TempSample:
    true_c: float
    measured_c: float
    code: int


def quantize_temperature(reading_c: float) -> int:
    """8-bit sensor code: 0.2 degC per LSB from 10.0 degC, clamped."""
    code = round((reading_c - SENSOR_ORIGIN_C) * 5.0)
    return min(max(code, 0), 255)


def dequantize_temperature(code: int) -> float:
    return SENSOR_ORIGIN_C + SENSOR_LSB_C * code


def sense_temperature(
    field: ThermalField, pose: BodyPose, t_s: float, params: RobotParams
) -> TempSample:
    """One sensor measurement; deterministic in (field, pose, t, seed)."""
    true_c = field.evaluate(pose.x, pose.y, t_s)
    if params.noise_c > 0:
        key = params.rng_seed * 2_147_483_629 + int(round(t_s * 1e6))
        eps = random.Random(key).uniform(-params.noise_c, params.noise_c)
    else:
        eps = 0.0
    measured = true_c + eps
    return TempSample(true_c, measured, quantize_temperature(measured))


# ---------------------------------------------------------------------------
# Temperature-dependent onboard clock

# Default-behavior loop time vs temperature: measured anchor points.
CLOCK_ANCHORS_C_S = ((10.0, 60.0), (25.0, 30.0), (40.0, 20.0))
CLOCK_VALID_BAND_C = (0.0, 50.0)


def clock_period(t_c: float) -> float:
    """Seconds per default-behavior cycle at bath temperature t_c.

    Piecewise-linear through the measured anchors, linearly extended and
    clamped to the validity band outside them.
    """
    t = _clamp(t_c, *CLOCK_VALID_BAND_C)
    anchors = CLOCK_ANCHORS_C_S
    if t <= anchors[1][0]:
        (t_a, s_a), (t_b, s_b) = anchors[0], anchors[1]
    else:
        (t_a, s_a), (t_b, s_b) = anchors[1], anchors[2]
    return s_a + (s_b - s_a) * (t - t_a) / (t_b - t_a)


def instruction_period(t_c: float, cycles_per_default_loop: int) -> float:
    """Seconds per instruction cycle for the onboard clock at temperature t_c."""
    return clock_period(t_c) / cycles_per_default_loop
