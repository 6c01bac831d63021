"""Cycle-level emulator for the onboard processor.

The processor owns four 8-bit registers, sixteen bytes of data memory, and
thirty-two 11-bit instruction words. Arithmetic wraps modulo 256 and
comparisons are unsigned. Everything robot-facing goes through a peripheral
bus: actuator drive, the temperature sensor, and the clock.

Robotic instructions occupy multiple clock cycles but retire the program
counter exactly once at issue:

    mot N   holds the current actuator drive for N cycles
    ts  Mx  samples the temperature sensor into Mx (one cycle)
    wav Mx  plays the 16 Manchester half-bit symbols of dmem[Mx], one
            symbol per cycle, on the selected electrode; the previous
            drive is restored afterwards

The actuator configuration is memory-mapped: any store to m15 latches the
byte as the electrode config (high nibble enable, low nibble polarity) and
the drive persists until the next store. Running past the end of a program
wraps the pc to 0; empty instruction memory reads as `mov r0, r0`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Protocol

from . import isa
from .isa import ACTUATOR_PORT, DMEM_SIZE, IMEM_SIZE, Instruction
from .physics import ElectrodeConfig

WAV_SYMBOLS = 16  # eight data bits, two half-bit symbols each


class LoadError(Exception):
    """A program image cannot be loaded."""


class ImageOverflow(LoadError):
    pass


class NestedLoopError(LoadError):
    """A bcnt body contains another bcnt; there is only one loop counter."""


@dataclass(frozen=True)
class FlagSet:
    eq: bool = True
    ne: bool = False
    gt: bool = False
    lt: bool = False

    def __post_init__(self):
        assert self.eq == (not self.ne)
        assert (self.gt, self.lt).count(True) == (1 if self.ne else 0)

    @classmethod
    def from_compare(cls, a: int, b: int) -> "FlagSet":
        if a == b:
            return cls(True, False, False, False)
        return cls(False, True, a > b, a < b)


@dataclass
class LoopState:
    active: bool = False
    owner: int = 0  # address of the bcnt that owns the counter
    target: int = 0
    remaining: int = 0


@dataclass
class StallState:
    op: str
    remaining: int
    # wav bookkeeping
    symbols: tuple[bool, ...] = ()
    index: int = 0
    group: int = 0


@dataclass
class TraceRecord:
    cycle: int
    pc: int
    instr: Instruction
    regs: tuple[int, ...]
    flags: FlagSet
    cfg: ElectrodeConfig


class PeripheralBus(Protocol):
    def set_actuators(self, cfg: ElectrodeConfig) -> None: ...
    def read_temperature_code(self) -> int: ...
    def clock_period_seconds(self) -> float: ...
    def emit_wav_symbol(self, group: int, level: bool) -> None: ...


class NullBus:
    """Inert bus for unit tests: fixed sensor code, fixed clock, no actuators."""

    def __init__(self, temperature_code: int = 0, period_s: float = 0.1):
        self.temperature_code = temperature_code
        self.period_s = period_s
        self.actuator_log: list[ElectrodeConfig] = []
        self.wav_log: list[tuple[int, bool]] = []

    def set_actuators(self, cfg: ElectrodeConfig) -> None:
        self.actuator_log.append(cfg)

    def read_temperature_code(self) -> int:
        return self.temperature_code

    def clock_period_seconds(self) -> float:
        return self.period_s

    def emit_wav_symbol(self, group: int, level: bool) -> None:
        self.wav_log.append((group, level))


@dataclass
class ProcessorState:
    pc: int = 0
    regs: list[int] = field(default_factory=lambda: [0] * isa.NUM_REGS)
    dmem: list[int] = field(default_factory=lambda: [0] * DMEM_SIZE)
    imem: list[int] = field(default_factory=lambda: [0] * IMEM_SIZE)
    flags: FlagSet = field(default_factory=FlagSet)
    loop: LoopState = field(default_factory=LoopState)
    actuator_cfg: ElectrodeConfig = field(default_factory=ElectrodeConfig)
    mode: str = "running"  # running | stalled | halted
    stall: StallState | None = None
    halt_reason: str | None = None
    cycle: int = 0
    # wav restores the pre-modulation drive at the start of the next cycle
    pending_restore: bool = False

    def copy(self) -> "ProcessorState":
        dup = replace(self)
        dup.regs = list(self.regs)
        dup.dmem = list(self.dmem)
        dup.imem = list(self.imem)
        dup.loop = replace(self.loop)
        dup.stall = replace(self.stall) if self.stall else None
        return dup


def manchester_half_bits(value: int) -> tuple[bool, ...]:
    """16 half-bit levels for an 8-bit value, data bits MSB-first.

    A 1 bit is a low->high mid-bit transition (low half then high half),
    a 0 bit is high->low. High means the modulated electrode driven positive.
    """
    levels: list[bool] = []
    for i in range(7, -1, -1):
        bit = (value >> i) & 1
        levels.extend((False, True) if bit else (True, False))
    return tuple(levels)


_decode_cache: dict[int, Instruction] = {}


def _decode(word: int) -> Instruction:
    instr = _decode_cache.get(word)
    if instr is None:
        instr = isa.decode(word)
        _decode_cache[word] = instr
    return instr


def validate_image(image, origin: int | None = None) -> None:
    """Load-time checks: fit, decodable words, no nested hardware loops."""
    start = image.origin if origin is None else origin
    if start < 0 or start + len(image.words) > IMEM_SIZE:
        raise ImageOverflow(
            f"{len(image.words)} words at origin {start} exceed {IMEM_SIZE}-word memory"
        )
    bcnt_at: dict[int, int] = {}
    for offset, word in enumerate(image.words):
        instr = isa.decode(word)  # propagates IllegalOpcode
        if instr.mnemonic == "bcnt":
            bcnt_at[start + offset] = instr.operands[0]
    for addr, off in bcnt_at.items():
        body = {(addr - k) % IMEM_SIZE for k in range(1, off + 1)}
        inside = body & set(bcnt_at)
        if inside:
            raise NestedLoopError(
                f"bcnt at {addr} encloses bcnt at {sorted(inside)}; only one loop counter exists"
            )


def load_program(state: ProcessorState, image, start_pc: int | None = None) -> ProcessorState:
    """Write an image into instruction memory and restart execution there.

    Registers, data memory, and the actuator configuration are preserved so a
    task program can build on the state an initialization program set up.
    """
    validate_image(image)
    for offset, word in enumerate(image.words):
        state.imem[image.origin + offset] = word
    state.pc = image.origin if start_pc is None else start_pc
    state.mode = "running"
    state.stall = None
    state.halt_reason = None
    state.loop = LoopState()
    return state


def _store_dmem(state: ProcessorState, bus: PeripheralBus, addr: int, value: int) -> None:
    state.dmem[addr] = value & 0xFF
    if addr == ACTUATOR_PORT:
        state.actuator_cfg = ElectrodeConfig.from_byte(value & 0xFF)
        bus.set_actuators(state.actuator_cfg)


def step(
    state: ProcessorState,
    bus: PeripheralBus,
    trace: Callable[[TraceRecord], None] | None = None,
) -> ProcessorState:
    """Advance exactly one clock cycle."""
    if state.mode == "halted":
        raise RuntimeError(f"stepping a halted processor: {state.halt_reason}")

    if state.pending_restore:
        state.pending_restore = False
        bus.set_actuators(state.actuator_cfg)

    state.cycle += 1

    if state.mode == "stalled":
        _stall_cycle(state, bus)
        return state

    pc = state.pc
    try:
        instr = _decode(state.imem[pc])
    except isa.IllegalOpcode as exc:
        state.mode = "halted"
        state.halt_reason = f"illegal instruction at {pc}: {exc}"
        return state

    if trace:
        trace(
            TraceRecord(
                state.cycle, pc, instr, tuple(state.regs), state.flags, state.actuator_cfg
            )
        )

    _execute(state, bus, pc, instr)
    return state


def _stall_cycle(state: ProcessorState, bus: PeripheralBus) -> None:
    stall = state.stall
    assert stall is not None
    if stall.op == "wav":
        level = stall.symbols[stall.index]
        stall.index += 1
        bus.emit_wav_symbol(stall.group, level)
        bus.set_actuators(state.actuator_cfg.with_polarity_bit(stall.group, level))
    stall.remaining -= 1
    if stall.remaining == 0:
        if stall.op == "wav":
            state.pending_restore = True
        state.mode = "running"
        state.stall = None


def _execute(state: ProcessorState, bus: PeripheralBus, pc: int, instr: Instruction) -> None:
    regs = state.regs
    ops = instr.operands
    mnem = instr.mnemonic
    next_pc = (pc + 1) % IMEM_SIZE

    if mnem == "mov":
        regs[ops[1]] = regs[ops[0]]
    elif mnem == "li":
        regs[ops[1]] = ops[0]
    elif mnem == "add":
        regs[ops[2]] = (regs[ops[0]] + regs[ops[1]]) & 0xFF
    elif mnem == "addi":
        regs[ops[2]] = (regs[ops[0]] + ops[1]) & 0xFF
    elif mnem == "sub":
        regs[ops[2]] = (regs[ops[0]] - regs[ops[1]]) & 0xFF
    elif mnem == "subi":
        regs[ops[2]] = (regs[ops[0]] - ops[1]) & 0xFF
    elif mnem == "and":
        regs[ops[2]] = regs[ops[0]] & regs[ops[1]]
    elif mnem == "or":
        regs[ops[2]] = regs[ops[0]] | regs[ops[1]]
    elif mnem == "sll":
        regs[ops[0]] = (regs[ops[0]] << ops[1]) & 0xFF
    elif mnem == "srl":
        regs[ops[0]] = regs[ops[0]] >> ops[1]
    elif mnem == "sb":
        _store_dmem(state, bus, ops[1], regs[ops[0]])
    elif mnem == "lb":
        regs[ops[1]] = state.dmem[ops[0]]
    elif mnem == "cmp":
        state.flags = FlagSet.from_compare(regs[ops[0]], regs[ops[1]])
    elif mnem == "cmpi":
        state.flags = FlagSet.from_compare(regs[ops[0]], ops[1])
    elif mnem == "j":
        next_pc = ops[0]
    elif mnem in ("beq", "bne", "bgt", "blt"):
        if getattr(state.flags, mnem[1:]):
            next_pc = (pc + ops[0]) % IMEM_SIZE
    elif mnem == "bcnt":
        next_pc = _bcnt(state, pc, ops[0], ops[1], next_pc)
    elif mnem == "mot":
        count = ops[0]
        if count > 1:
            state.mode = "stalled"
            state.stall = StallState("mot", count - 1)
    elif mnem == "ts":
        _store_dmem(state, bus, ops[0], bus.read_temperature_code())
    elif mnem == "wav":
        symbols = manchester_half_bits(state.dmem[ops[0]])
        group = ops[1]
        bus.emit_wav_symbol(group, symbols[0])
        bus.set_actuators(state.actuator_cfg.with_polarity_bit(group, symbols[0]))
        state.mode = "stalled"
        state.stall = StallState("wav", WAV_SYMBOLS - 1, symbols, 1, group)
    else:  # pragma: no cover
        raise AssertionError(f"unhandled mnemonic {mnem}")

    state.pc = next_pc


def _bcnt(state: ProcessorState, pc: int, off: int, count: int, next_pc: int) -> int:
    loop = state.loop
    target = (pc - off) % IMEM_SIZE
    if not (loop.active and loop.owner == pc):
        # First encounter (or a different bcnt clobbering the single counter).
        loop.active = True
        loop.owner = pc
        loop.target = target
        loop.remaining = count
        if count > 0:
            return target
        loop.active = False
        return next_pc
    loop.remaining -= 1
    if loop.remaining > 0:
        return loop.target
    loop.active = False
    return next_pc


def run(
    state: ProcessorState,
    bus: PeripheralBus,
    cycles: int,
    trace: Callable[[TraceRecord], None] | None = None,
) -> ProcessorState:
    """Step up to `cycles` cycles, stopping early if the processor halts."""
    for _ in range(cycles):
        if state.mode == "halted":
            break
        step(state, bus, trace)
    return state


def reset_state() -> ProcessorState:
    """Power-on state: cleared machine with the default behavior program loaded."""
    from . import programs

    state = ProcessorState()
    load_program(state, programs.default_image())
    return state


def run_default_cycle(state: ProcessorState, bus: PeripheralBus) -> int:
    """Execute one full pass of the default behavior (until the pc wraps to 0).

    Returns the number of clock cycles consumed; wall time is that count times
    the bus clock period.
    """
    start_cycle = state.cycle
    guard = 100_000
    while guard:
        step(state, bus)
        if state.mode == "running" and state.pc == 0:
            return state.cycle - start_cycle
        guard -= 1
    raise RuntimeError("default behavior did not wrap within the cycle guard")
