"""Discrete-time scenario runner.

Each tick the runner: applies due schedule actions, feeds downlink bit slots
and robot clock cycles to every robot in exact time order, integrates motion
piecewise between actuator changes, and appends one telemetry record per
robot at the tick boundary.

Timing model: a core cycle occupies [start, start + period); its
architectural effects (including actuator changes) apply at the start
instant. Downlink bit slots are sampled by the receiver at the slot end.
Telemetry records are instantaneous samples at tick boundaries. Scenarios
wanting bit-exact telemetry decodes should pick tick and downlink rates on
a common binary lattice (e.g. 4 Hz slots, 0.0625 s ticks) so every event
lands exactly on a record.

Everything is deterministic in (scenario, master_seed): per-robot draws are
seeded, and no wall-clock state enters the loop.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

from .. import core, optical, physics, programs
from ..asm import ProgramImage
from ..optical import (
    DownlinkFrame,
    FrameAborted,
    FrameRejected,
    PowerState,
    ProgramCommitted,
    Receiver,
)
from ..physics import BodyPose, ElectrodeConfig, RobotParams, Twist, ZERO_TWIST
from .scenario import Scenario, SendFrame, SetFieldSign, SetIntensity

log = logging.getLogger("microbot.runner")


@dataclass(frozen=True)
class TelemetryRecord:
    t_s: float
    robot_id: int
    x_um: float
    y_um: float
    theta_deg: float
    enable: int
    polarity: int
    mode: str
    temp_code: int | None
    tags: tuple[str, ...] = ()


@dataclass
class Transmission:
    start_s: float
    slot_s: float
    bits: list[bool]
    target: str | int
    clock_lock: bool

    @property
    def end_s(self) -> float:
        return self.start_s + len(self.bits) * self.slot_s


class _RobotBus:
    """Peripheral bus adapter; the runner points `now` at the active cycle start."""

    def __init__(self, robot: "_Robot", sim: "Simulation"):
        self.robot = robot
        self.sim = sim
        self.now = 0.0

    def set_actuators(self, cfg: ElectrodeConfig) -> None:
        self.robot.apply_config(cfg, self.now)

    def read_temperature_code(self) -> int:
        robot = self.robot
        sample = physics.sense_temperature(
            self.sim.field, robot.pose, self.now, robot.params
        )
        robot.last_temp_code = sample.code
        robot.tags.append(f"ts@{self.now!r}")
        return sample.code

    def clock_period_seconds(self) -> float:
        return self.robot.period_s(self.now)

    def emit_wav_symbol(self, group: int, level: bool) -> None:
        pass


class _Robot:
    def __init__(self, spec, sim: "Simulation", master_seed: int):
        self.spec = spec
        self.sim = sim
        self.params = RobotParams(
            size_variant=spec.size_variant,
            type_code=spec.type_code,
            rng_seed=spec.seed + master_seed,
            mobility_scale=spec.mobility_scale,
            noise_c=spec.noise_c,
        )
        self.bus = _RobotBus(self, sim)
        self.receiver = Receiver(type_code=spec.type_code)
        self.power = PowerState.INERT  # resolved at the first tick
        self.state: core.ProcessorState | None = None
        self.pose = replace(spec.pose0)
        self.motion_t = 0.0
        self.twist: Twist = ZERO_TWIST
        self.effective_cfg = ElectrodeConfig()
        self.next_cycle_at = 0.0
        self.clock_locked = False
        self.locked_period_s = 0.25
        self.last_temp_code: int | None = None
        self.tags: list[str] = []

    # -- clocking ---------------------------------------------------------

    def period_s(self, t: float) -> float:
        if self.clock_locked:
            return self.locked_period_s
        t_c = self.sim.field.evaluate(self.pose.x, self.pose.y, t)
        return physics.instruction_period(t_c, programs.DEFAULT_LOOP_CYCLES)

    # -- motion -----------------------------------------------------------

    def apply_config(self, cfg: ElectrodeConfig, t: float) -> None:
        self.integrate_to(t)
        self.effective_cfg = cfg
        self.refresh_twist()

    def refresh_twist(self) -> None:
        if self.power is PowerState.INERT:
            self.twist = ZERO_TWIST
        else:
            self.twist = physics.twist_of(self.effective_cfg, self.params)

    def integrate_to(self, t: float) -> None:
        dt = t - self.motion_t
        if dt <= 0:
            return
        if self.twist is not ZERO_TWIST and (
            self.twist.v_forward or self.twist.v_lateral or self.twist.omega
        ):
            self.pose = physics.integrate(self.pose, self.twist, dt)
        dx, dy = self.sim.drift_um_s
        if dx or dy:
            self.pose = BodyPose(self.pose.x + dx * dt, self.pose.y + dy * dt, self.pose.theta)
        self.motion_t = t

    # -- power ------------------------------------------------------------

    def update_power(self, t: float) -> None:
        new = optical.power_ok(self.sim.power_wm2)
        if new is self.power:
            return
        if new is PowerState.INERT:
            self.tags.append("power_lost")
            for event in self.receiver.abort("power lost"):
                self.sim.log_event(t, self.spec.id, f"frame aborted: {event.reason}")
            self.integrate_to(t)
            self.twist = ZERO_TWIST
        elif self.power is PowerState.INERT:
            # Rising edge: power-on reset into the default behavior.
            self.tags.append("power_on")
            self.reset(t)
        self.power = new
        self.refresh_twist()

    def reset(self, t: float) -> None:
        self.state = core.reset_state()
        if self.spec.program is not None:
            _, words = _resolved_program(self.spec.program)
            core.load_program(self.state, ProgramImage(words))
        self.receiver = Receiver(type_code=self.spec.type_code)
        self.clock_locked = self.spec.clock_locked
        self.locked_period_s = 1.0 / self.sim.scenario.clock_hz
        self.next_cycle_at = t
        self.integrate_to(t)
        self.effective_cfg = self.state.actuator_cfg
        self.refresh_twist()

    # -- downlink ---------------------------------------------------------

    def feed_bit(self, t_end: float, bit: bool, comms_level: float) -> None:
        total = self.sim.power_wm2 + comms_level
        if optical.power_ok(total) is PowerState.SATURATED:
            for event in self.receiver.abort("receiver saturated"):
                self.sim.log_event(t_end, self.spec.id, f"frame aborted: {event.reason}")
                self.tags.append("frame_aborted")
            return
        for event in self.receiver.step_bit(bit):
            if isinstance(event, ProgramCommitted):
                self.commit(event, t_end)
            elif isinstance(event, FrameRejected):
                self.tags.append("frame_rejected")
                self.sim.log_event(t_end, self.spec.id, f"frame rejected: {event.reason}")
            elif isinstance(event, FrameAborted):
                self.tags.append("frame_aborted")

    def commit(self, event: ProgramCommitted, t: float) -> None:
        assert self.state is not None
        core.load_program(self.state, ProgramImage(event.words))
        self.clock_locked = event.clock_lock
        self.locked_period_s = 1.0 / self.sim.scenario.clock_hz
        self.next_cycle_at = t
        self.tags.append("commit")
        self.sim.log_event(
            t, self.spec.id, f"program committed ({len(event.words)} words, {event.matched})"
        )

    # -- reporting --------------------------------------------------------

    def mode_string(self) -> str:
        if self.power is PowerState.INERT:
            return "inert"
        if self.receiver.busy:
            return "listening"
        if self.state is None:
            return "inert"
        if self.state.mode == "stalled" and self.state.stall is not None:
            return self.state.stall.op
        return self.state.mode


def _resolved_program(source: str) -> tuple[str, tuple[int, ...]]:
    from .scenario import resolve_program

    return resolve_program(source)


class Simulation:
    """Stepping engine over one scenario; `run_scenario` drives it to completion.

    `trace_hook(robot_id, record)` receives every retired instruction's
    core.TraceRecord, for callers that want cycle-level logs.
    """

    def __init__(self, scenario: Scenario, master_seed: int = 0, trace_hook=None):
        self.scenario = scenario
        self.trace_hook = trace_hook
        self.field = scenario.field
        self.power_wm2 = scenario.power_wm2
        self.comms_wm2 = scenario.comms_wm2
        self.drift_um_s = scenario.drift_um_s
        self.tick_s = scenario.tick_s
        self.tick_index = 0
        self.robots = [_Robot(spec, self, master_seed) for spec in scenario.robots]
        self.pending = list(scenario.schedule)
        self.transmission: Transmission | None = None
        self.telemetry: list[TelemetryRecord] = []
        self.events: list[str] = []
        self._record_all(0.0)

    # -- bookkeeping ------------------------------------------------------

    @property
    def now(self) -> float:
        return self.tick_index * self.tick_s

    def log_event(self, t: float, robot_id: int | None, message: str) -> None:
        who = f"robot {robot_id}" if robot_id is not None else "world"
        self.events.append(f"{t!r} {who}: {message}")
        log.debug("t=%s %s: %s", t, who, message)

    def _record_all(self, t: float) -> None:
        for robot in self.robots:
            self.telemetry.append(
                TelemetryRecord(
                    t_s=t,
                    robot_id=robot.spec.id,
                    x_um=robot.pose.x,
                    y_um=robot.pose.y,
                    theta_deg=robot.pose.theta,
                    enable=robot.effective_cfg.enable,
                    polarity=robot.effective_cfg.polarity,
                    mode=robot.mode_string(),
                    temp_code=robot.last_temp_code,
                    tags=tuple(robot.tags),
                )
            )
            robot.tags.clear()

    # -- schedule ---------------------------------------------------------

    def _apply_actions(self, t0: float) -> None:
        while self.pending and self.pending[0].t_s <= t0:
            action = self.pending.pop(0)
            if isinstance(action, SetFieldSign):
                if hasattr(self.field, "sign"):
                    self.field.sign = action.sign
                    self.log_event(t0, None, f"field sign set to {action.sign:+d}")
                else:
                    self.log_event(t0, None, "set_field_sign ignored: field has no gradient")
            elif isinstance(action, SetIntensity):
                self.power_wm2 = action.power_wm2
                self.comms_wm2 = action.comms_wm2
                self.log_event(
                    t0, None, f"intensity set to {action.power_wm2}+{action.comms_wm2} W/m2"
                )
            elif isinstance(action, SendFrame):
                self._start_transmission(action, t0)

    def _start_transmission(self, action: SendFrame, t0: float) -> None:
        start = t0
        if self.transmission is not None and self.transmission.end_s > t0:
            start = self.transmission.end_s  # serialize back-to-back frames
        passcode = (
            optical.GLOBAL_PASSCODE
            if action.target == "global"
            else optical.TYPE_PASSCODES.get(action.target)
        )
        if passcode is None:
            self.log_event(t0, None, f"send_frame dropped: unknown type {action.target}")
            return
        frame = DownlinkFrame(
            passcode=passcode,
            words=action.words,
            clock_hz=self.scenario.clock_hz,
            clock_lock=action.clock_lock,
        )
        self.transmission = Transmission(
            start_s=start,
            slot_s=1.0 / frame.clock_hz,
            bits=optical.frame_bits(frame),
            target=action.target,
            clock_lock=action.clock_lock,
        )
        self.log_event(
            t0,
            None,
            f"frame to {action.target}: {len(action.words)} words, "
            f"{len(self.transmission.bits)} slots from t={start!r}",
        )

    def _due_bits(self, t0: float, t1: float) -> list[tuple[float, bool, float]]:
        """(slot_end, bit, comms_level) for downlink slots ending in (t0, t1]."""
        tx = self.transmission
        if tx is None:
            return []
        out = []
        for k, bit in enumerate(tx.bits):
            end = tx.start_s + (k + 1) * tx.slot_s
            if end <= t0:
                continue
            if end > t1:
                break
            out.append((end, bit, self.comms_wm2 if bit else 0.0))
        if tx.end_s <= t1:
            self.transmission = None
        return out

    # -- main loop --------------------------------------------------------

    def tick(self) -> None:
        t0 = self.now
        t1 = (self.tick_index + 1) * self.tick_s
        self._apply_actions(t0)
        bits = self._due_bits(t0, t1)

        for robot in self.robots:
            robot.update_power(t0)
            if robot.power is PowerState.INERT:
                robot.integrate_to(t1)
            else:
                self._advance_robot(robot, t1, bits)
            robot.integrate_to(t1)

        self.tick_index += 1
        self._record_all(t1)

    def _advance_robot(
        self, robot: _Robot, t1: float, bits: list[tuple[float, bool, float]]
    ) -> None:
        bit_i = 0
        while True:
            t_bit = bits[bit_i][0] if bit_i < len(bits) else None
            can_step = (
                robot.state is not None
                and robot.state.mode != "halted"
                and not robot.receiver.busy
                and robot.next_cycle_at < t1
            )
            t_cycle = robot.next_cycle_at if can_step else None

            if t_bit is None and t_cycle is None:
                return
            if t_cycle is None or (t_bit is not None and t_bit <= t_cycle):
                end, bit, level = bits[bit_i]
                bit_i += 1
                robot.feed_bit(end, bit, level)
                continue

            robot.integrate_to(t_cycle)
            robot.bus.now = t_cycle
            if robot.state.mode == "halted":  # pragma: no cover
                return
            trace = None
            if self.trace_hook is not None:
                rid = robot.spec.id
                trace = lambda rec, rid=rid: self.trace_hook(rid, rec)
            core.step(robot.state, robot.bus, trace)
            if robot.state.mode == "halted":
                robot.tags.append("halt")
                self.log_event(t_cycle, robot.spec.id, robot.state.halt_reason or "halted")
            robot.next_cycle_at = t_cycle + robot.period_s(t_cycle)

    def run(self, duration_s: float | None = None) -> None:
        duration = self.scenario.duration_s if duration_s is None else duration_s
        ticks = int(round(duration / self.tick_s))
        for _ in range(ticks):
            self.tick()


@dataclass
class RunResult:
    telemetry: list[TelemetryRecord]
    events: list[str]


def run_scenario(scenario: Scenario, master_seed: int = 0) -> RunResult:
    sim = Simulation(scenario, master_seed)
    sim.run()
    return RunResult(sim.telemetry, sim.events)
