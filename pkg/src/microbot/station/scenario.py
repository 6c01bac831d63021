"""Scenario files: one JSON document describing arena, field, robots, and schedule.

Field names carry their units. A minimal scenario:

    {
      "arena": {"width_um": 20000, "height_um": 20000},
      "field": {"kind": "uniform", "t0_c": 25.0},
      "robots": [
        {"id": 1, "type_code": 1, "size_variant": "small",
         "pose0": {"x_um": 0, "y_um": 0, "theta_deg": 0}, "seed": 7}
      ],
      "light": {"power_wm2": 600, "comms_wm2": 1000, "clock_hz": 4},
      "schedule": [
        {"t_s": 5, "action": "send_frame", "target": "global",
         "program": "@thermotaxis", "clock_lock": false}
      ],
      "tick_s": 0.25,
      "duration_s": 600
    }

Programs in robots[].program (preloaded at power-on in place of the default
behavior) and schedule send_frame actions are assembly source; the shipped
reference programs are available as "@default", "@temperature_report", and
"@thermotaxis". Schedule actions: send_frame {target: "global"|type int,
program, clock_lock}, set_field_sign {sign: +-1}, set_intensity {power_wm2,
comms_wm2}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .. import asm, programs
from ..physics import (
    BodyPose,
    LinearGradientField,
    SIZE_VARIANTS,
    ThermalField,
    UniformField,
    WarmingBathField,
)


class ConfigError(Exception):
    """Scenario validation failure; .path points at the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class RobotSpec:
    id: int
    type_code: int = 1
    size_variant: str = "small"
    pose0: BodyPose = dc_field(default_factory=BodyPose)
    seed: int = 0
    mobility_scale: float = 1.0
    noise_c: float = 0.24
    program: str | None = None  # assembly source preloaded at power-on
    clock_locked: bool = False  # start tied to the downlink clock rate


@dataclass(frozen=True)
class SendFrame:
    t_s: float
    target: str | int  # "global" or a type code
    source: str
    words: tuple[int, ...]
    clock_lock: bool = False


@dataclass(frozen=True)
class SetFieldSign:
    t_s: float
    sign: int


@dataclass(frozen=True)
class SetIntensity:
    t_s: float
    power_wm2: float
    comms_wm2: float


ScheduleAction = SendFrame | SetFieldSign | SetIntensity


@dataclass
class Scenario:
    arena_um: tuple[float, float]
    field: ThermalField
    robots: list[RobotSpec]
    schedule: list[ScheduleAction]
    power_wm2: float = 600.0
    comms_wm2: float = 1000.0
    clock_hz: float = 4.0
    tick_s: float = 0.25
    duration_s: float = 60.0
    drift_um_s: tuple[float, float] = (0.0, 0.0)


def resolve_program(source: str, path: str = "program") -> tuple[str, tuple[int, ...]]:
    """Expand @references, assemble, and return (source, words)."""
    if source.startswith("@"):
        name = source[1:]
        if name not in programs.REFERENCE_SOURCES:
            raise ConfigError(path, f"unknown reference program {source!r}")
        source = programs.REFERENCE_SOURCES[name]
    try:
        image = asm.assemble(source)
    except asm.AsmError as exc:
        raise ConfigError(path, f"program does not assemble: {exc}") from exc
    return source, image.words


def _get(obj: dict, key: str, kind, path: str, default=...):
    if key not in obj:
        if default is not ...:
            return default
        raise ConfigError(f"{path}.{key}", "missing required field")
    value = obj[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ConfigError(f"{path}.{key}", f"expected {kind.__name__}, got {value!r}")
    return value


def _parse_field(obj: dict, path: str) -> ThermalField:
    kind = _get(obj, "kind", str, path)
    if kind == "uniform":
        return UniformField(_get(obj, "t0_c", float, path))
    if kind == "warming_bath":
        tau = _get(obj, "tau_s", float, path)
        if tau <= 0:
            raise ConfigError(f"{path}.tau_s", "must be positive")
        return WarmingBathField(
            _get(obj, "t0_c", float, path), _get(obj, "t_inf_c", float, path), tau
        )
    if kind == "linear_gradient":
        grad = _get(obj, "grad_c_per_mm", list, path)
        if len(grad) != 2 or not all(isinstance(g, (int, float)) for g in grad):
            raise ConfigError(f"{path}.grad_c_per_mm", "expected [gx, gy]")
        origin = _get(obj, "origin_um", list, path, [0.0, 0.0])
        sign = _get(obj, "sign", int, path, 1)
        if sign not in (-1, 1):
            raise ConfigError(f"{path}.sign", "must be +1 or -1")
        return LinearGradientField(
            _get(obj, "t0_c", float, path),
            (float(grad[0]), float(grad[1])),
            (float(origin[0]), float(origin[1])),
            sign,
        )
    raise ConfigError(f"{path}.kind", f"unknown field kind {kind!r}")


def _parse_robot(obj: dict, path: str) -> RobotSpec:
    variant = _get(obj, "size_variant", str, path, "small")
    if variant not in SIZE_VARIANTS:
        raise ConfigError(f"{path}.size_variant", f"expected one of {sorted(SIZE_VARIANTS)}")
    pose_obj = _get(obj, "pose0", dict, path, {})
    pose = BodyPose(
        _get(pose_obj, "x_um", float, f"{path}.pose0", 0.0),
        _get(pose_obj, "y_um", float, f"{path}.pose0", 0.0),
        _get(pose_obj, "theta_deg", float, f"{path}.pose0", 0.0),
    )
    program = obj.get("program")
    if program is not None:
        program, _ = resolve_program(program, f"{path}.program")
    noise = _get(obj, "noise_c", float, path, 0.24)
    if noise < 0:
        raise ConfigError(f"{path}.noise_c", "must be non-negative")
    return RobotSpec(
        id=_get(obj, "id", int, path),
        type_code=_get(obj, "type_code", int, path, 1),
        size_variant=variant,
        pose0=pose,
        seed=_get(obj, "seed", int, path, 0),
        mobility_scale=_get(obj, "mobility_scale", float, path, 1.0),
        noise_c=noise,
        program=program,
        clock_locked=_get(obj, "clock_locked", bool, path, False),
    )


def _parse_action(obj: dict, path: str) -> ScheduleAction:
    t_s = _get(obj, "t_s", float, path)
    if t_s < 0:
        raise ConfigError(f"{path}.t_s", "must be non-negative")
    action = _get(obj, "action", str, path)
    if action == "send_frame":
        target = obj.get("target", "global")
        if target != "global" and not isinstance(target, int):
            raise ConfigError(f"{path}.target", 'expected "global" or a type code')
        source, words = resolve_program(
            _get(obj, "program", str, path), f"{path}.program"
        )
        return SendFrame(t_s, target, source, words, _get(obj, "clock_lock", bool, path, False))
    if action == "set_field_sign":
        sign = _get(obj, "sign", int, path)
        if sign not in (-1, 1):
            raise ConfigError(f"{path}.sign", "must be +1 or -1")
        return SetFieldSign(t_s, sign)
    if action == "set_intensity":
        return SetIntensity(
            t_s,
            _get(obj, "power_wm2", float, path),
            _get(obj, "comms_wm2", float, path),
        )
    raise ConfigError(f"{path}.action", f"unknown action {action!r}")


def parse_scenario(obj: dict) -> Scenario:
    if not isinstance(obj, dict):
        raise ConfigError("$", "scenario must be a JSON object")
    arena = _get(obj, "arena", dict, "$")
    width = _get(arena, "width_um", float, "$.arena")
    height = _get(arena, "height_um", float, "$.arena")
    if width <= 0 or height <= 0:
        raise ConfigError("$.arena", "dimensions must be positive")

    thermal = _parse_field(_get(obj, "field", dict, "$"), "$.field")

    robots_obj = _get(obj, "robots", list, "$")
    if not robots_obj:
        raise ConfigError("$.robots", "at least one robot required")
    robots = [_parse_robot(r, f"$.robots[{i}]") for i, r in enumerate(robots_obj)]
    ids = [r.id for r in robots]
    if len(set(ids)) != len(ids):
        raise ConfigError("$.robots", f"duplicate robot ids: {ids}")

    light = _get(obj, "light", dict, "$", {})
    schedule = [
        _parse_action(a, f"$.schedule[{i}]")
        for i, a in enumerate(_get(obj, "schedule", list, "$", []))
    ]
    schedule.sort(key=lambda a: a.t_s)

    tick = _get(obj, "tick_s", float, "$", 0.25)
    if tick <= 0:
        raise ConfigError("$.tick_s", "must be positive")
    duration = _get(obj, "duration_s", float, "$", 60.0)
    if duration <= 0:
        raise ConfigError("$.duration_s", "must be positive")

    drift = _get(obj, "drift_um_s", list, "$", [0.0, 0.0])
    if len(drift) != 2:
        raise ConfigError("$.drift_um_s", "expected [vx, vy]")

    return Scenario(
        arena_um=(width, height),
        field=thermal,
        robots=robots,
        schedule=schedule,
        power_wm2=_get(light, "power_wm2", float, "$.light", 600.0),
        comms_wm2=_get(light, "comms_wm2", float, "$.light", 1000.0),
        clock_hz=_get(light, "clock_hz", float, "$.light", 4.0),
        tick_s=tick,
        duration_s=duration,
        drift_um_s=(float(drift[0]), float(drift[1])),
    )


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("$", f"not valid JSON: {exc}") from exc
    return parse_scenario(obj)


def field_summary(thermal: ThermalField) -> dict:
    """Serializable description of the field for snapshots and logs."""
    if isinstance(thermal, UniformField):
        return {"kind": "uniform", "t0_c": thermal.t0_c}
    if isinstance(thermal, WarmingBathField):
        return {
            "kind": "warming_bath",
            "t0_c": thermal.t0_c,
            "t_inf_c": thermal.t_inf_c,
            "tau_s": thermal.tau_s,
        }
    return {
        "kind": "linear_gradient",
        "t0_c": thermal.t0_c,
        "grad_c_per_mm": list(thermal.grad_c_per_mm),
        "origin_um": list(thermal.origin_um),
        "sign": thermal.sign,
    }
