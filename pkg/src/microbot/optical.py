"""Two-LED optical link: power gating, downlink framing, and the receiver.

One LED powers the robot's photovoltaics, the other carries data as on/off
flashes. A downlink frame is, one bit per clock slot, MSB-first:

    16-bit passcode | 6-bit word count | 1-bit clock-lock | count x 11-bit words

The receiver shifts every incoming bit through a 16-bit register and arms
only when the register matches the global passcode or this robot's
type-specific passcode, so stray flashes cannot alter the robot's state.
After the header it accumulates the words and hands them over for loading;
a frame whose word count exceeds instruction memory or whose words do not
decode is dropped. The clock-lock bit keeps the robot's instruction clock
tied to the downlink bit rate instead of the temperature-dependent onboard
oscillator.

Power gating: the robot is inert below 200 W/m2 of incident power and the
receiver saturates (no reprogramming) above 4000 W/m2 total.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from . import isa

POWER_FLOOR_WM2 = 200.0
POWER_CEILING_WM2 = 4000.0
PV_RESPONSIVITY_A_PER_W = 0.34
PV_OPTICAL_LOSS_FACTOR = 10.0  # incident optical power reaching the junction

PASSCODE_BITS = 16
COUNT_BITS = 6
HEADER_BITS = COUNT_BITS + 1  # word count + clock-lock flag

GLOBAL_PASSCODE = 0x9D63
TYPE_PASSCODES = {
    1: 0x6B2A,
    2: 0xC4D5,
    3: 0x3E96,
    4: 0x517B,
}


class PowerState(enum.Enum):
    INERT = "inert"
    OPERATIONAL = "operational"
    SATURATED = "saturated"


def power_ok(intensity_wm2: float) -> PowerState:
    """Classify incident intensity against the operating window."""
    if intensity_wm2 < POWER_FLOOR_WM2:
        return PowerState.INERT
    if intensity_wm2 <= POWER_CEILING_WM2:
        return PowerState.OPERATIONAL
    return PowerState.SATURATED


def harvest_current(intensity_wm2: float, cell_area_m2: float) -> float:
    """Photovoltaic current in amperes for the given incident intensity."""
    return PV_RESPONSIVITY_A_PER_W * (intensity_wm2 * cell_area_m2 / PV_OPTICAL_LOSS_FACTOR)


@dataclass(frozen=True)
class LightSample:
    t_s: float
    power_wm2: float
    comms_wm2: float


@dataclass(frozen=True)
class LightTrace:
    samples: tuple[LightSample, ...]

    def to_csv(self) -> str:
        lines = ["t_s,power_wm2,comms_wm2"]
        lines += [f"{s.t_s!r},{s.power_wm2!r},{s.comms_wm2!r}" for s in self.samples]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "LightTrace":
        rows = text.strip().splitlines()[1:]
        samples = []
        for row in rows:
            t, p, c = row.split(",")
            samples.append(LightSample(float(t), float(p), float(c)))
        return cls(tuple(samples))


@dataclass(frozen=True)
class DownlinkFrame:
    passcode: int
    words: tuple[int, ...] = ()
    clock_hz: float = 4.0
    clock_lock: bool = False

    def __post_init__(self):
        if not 0 <= self.passcode < (1 << PASSCODE_BITS):
            raise ValueError(f"passcode {self.passcode:#x} wider than {PASSCODE_BITS} bits")
        if len(self.words) > isa.IMEM_SIZE:
            raise ValueError(f"{len(self.words)} words exceed instruction memory")
        if any(not 0 <= w < isa.WORD_COUNT for w in self.words):
            raise ValueError("frame words must be 11-bit")
        if self.clock_hz <= 0:
            raise ValueError("clock_hz must be positive")

    @property
    def word_count(self) -> int:
        return len(self.words)


def _bits_msb(value: int, width: int) -> list[bool]:
    return [bool((value >> i) & 1) for i in range(width - 1, -1, -1)]


def frame_bits(frame: DownlinkFrame) -> list[bool]:
    """The frame's on/off keying sequence, one entry per clock slot."""
    bits = _bits_msb(frame.passcode, PASSCODE_BITS)
    bits += _bits_msb(frame.word_count, COUNT_BITS)
    bits.append(frame.clock_lock)
    for word in frame.words:
        bits += _bits_msb(word, isa.WORD_BITS)
    return bits


def modulate(
    frame: DownlinkFrame,
    power_wm2: float = 600.0,
    comms_wm2: float = 1000.0,
    t0_s: float = 0.0,
) -> LightTrace:
    """Render a frame as a light trace, one sample per bit slot.

    Each sample gives the intensities that hold from its timestamp until the
    next slot; the power LED stays constant while the comms LED keys on/off.
    """
    slot = 1.0 / frame.clock_hz
    samples = [
        LightSample(t0_s + i * slot, power_wm2, comms_wm2 if bit else 0.0)
        for i, bit in enumerate(frame_bits(frame))
    ]
    return LightTrace(tuple(samples))


# ---------------------------------------------------------------------------
# Receiver


@dataclass(frozen=True)
class PasscodeMatched:
    kind: str  # "global" | "type"


@dataclass(frozen=True)
class ProgramCommitted:
    words: tuple[int, ...]
    clock_lock: bool
    matched: str


@dataclass(frozen=True)
class FrameRejected:
    reason: str


@dataclass(frozen=True)
class FrameAborted:
    reason: str


ReceiverEvent = PasscodeMatched | ProgramCommitted | FrameRejected | FrameAborted


@dataclass
class Receiver:
    """Per-robot downlink receiver.

    In the idle phase every bit shifts through the 16-bit passcode register;
    a match arms the header phase, then the word phase, then the frame is
    committed and the receiver returns to idle. The caller is responsible
    for power gating (no bits while inert or saturated).
    """

    type_code: int = 1
    global_passcode: int = GLOBAL_PASSCODE
    type_passcode: int | None = None
    comms_on_threshold_wm2: float = 100.0

    phase: str = "idle"  # idle | header | receiving
    shift: int = 0
    matched: str | None = None
    _collected: list[bool] = field(default_factory=list)
    _expect_words: int = 0
    _clock_lock: bool = False
    _words: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.type_passcode is None:
            self.type_passcode = TYPE_PASSCODES.get(self.type_code, TYPE_PASSCODES[1])

    @property
    def busy(self) -> bool:
        """True while a matched frame is being received (the core listens)."""
        return self.phase != "idle"

    def step(self, sample: LightSample) -> list[ReceiverEvent]:
        return self.step_bit(sample.comms_wm2 >= self.comms_on_threshold_wm2)

    def step_bit(self, bit: bool) -> list[ReceiverEvent]:
        if self.phase == "idle":
            self.shift = ((self.shift << 1) | int(bit)) & 0xFFFF
            if self.shift == self.global_passcode:
                return self._arm("global")
            if self.shift == self.type_passcode:
                return self._arm("type")
            return []
        if self.phase == "header":
            self._collected.append(bit)
            if len(self._collected) < HEADER_BITS:
                return []
            count = 0
            for b in self._collected[:COUNT_BITS]:
                count = (count << 1) | int(b)
            self._clock_lock = self._collected[COUNT_BITS]
            self._collected.clear()
            if count > isa.IMEM_SIZE:
                return self._finish(FrameRejected(f"word count {count} exceeds memory"))
            if count == 0:
                return self._finish(
                    ProgramCommitted((), self._clock_lock, self.matched or "global")
                )
            self._expect_words = count
            self.phase = "receiving"
            return []
        # receiving
        self._collected.append(bit)
        if len(self._collected) == isa.WORD_BITS:
            word = 0
            for b in self._collected:
                word = (word << 1) | int(b)
            self._collected.clear()
            self._words.append(word)
            if len(self._words) == self._expect_words:
                return self._complete()
        return []

    def _arm(self, kind: str) -> list[ReceiverEvent]:
        self.phase = "header"
        self.matched = kind
        self.shift = 0
        self._collected.clear()
        self._words.clear()
        return [PasscodeMatched(kind)]

    def _complete(self) -> list[ReceiverEvent]:
        words = tuple(self._words)
        for index, word in enumerate(words):
            try:
                isa.decode(word)
            except isa.IllegalOpcode:
                return self._finish(
                    FrameRejected(f"word {index} ({word:#05x}) does not decode")
                )
        return self._finish(ProgramCommitted(words, self._clock_lock, self.matched or "global"))

    def _finish(self, event: ReceiverEvent) -> list[ReceiverEvent]:
        self.phase = "idle"
        self.matched = None
        self.shift = 0
        self._collected.clear()
        self._words.clear()
        self._expect_words = 0
        return [event]

    def abort(self, reason: str) -> list[ReceiverEvent]:
        """Drop any frame in progress (power loss or saturation mid-frame)."""
        if self.phase == "idle":
            self.shift = 0
            return []
        return self._finish(FrameAborted(reason))
