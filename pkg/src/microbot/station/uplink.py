"""Decode motion-encoded telemetry back into sensor values.

During a `wav` burst the robot plays 16 half-bit symbols, one per clock
cycle, by toggling one electrode's polarity; the body displacement differs
between the high and low levels. The decoder segments the burst into 16
windows of one symbol period, scores each window's displacement, and splits
the windows into the 8 high / 8 low levels that Manchester coding
guarantees. Mid-bit low-to-high is a 1, high-to-low is a 0, data bits come
MSB-first, and the temperature is 10.0 + 0.2 * value.

The default detector scores windows by displacement magnitude, which suits
the shipped reporting program (motionless base drive, so high symbols move
and low symbols do not). A projection detector onto a configured axis is
available for base drives that move in both levels.

The symbol period is supplied by the caller: the base station granted the
robot its clock (clock-locked programming), so it knows the rate.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Sequence

from ..physics import dequantize_temperature
from .runner import TelemetryRecord

WAV_SYMBOLS = 16


class DecodeFailure(Exception):
    def __init__(self, message: str, symbol_index: int | None = None):
        self.symbol_index = symbol_index
        if symbol_index is not None:
            message = f"{message} (first bad symbol {symbol_index})"
        super().__init__(message)


@dataclass(frozen=True)
class UplinkDecodeResult:
    bits: tuple[int, ...]
    value: int
    temperature_c: float
    symbol_boundaries: tuple[float, ...]
    start_s: float


class _PoseSeries:
    def __init__(self, records: Sequence[TelemetryRecord]):
        self.times = [r.t_s for r in records]
        self.records = list(records)

    def position(self, t: float) -> tuple[float, float]:
        i = bisect_left(self.times, t)
        for j in (i, i - 1, i + 1):
            if 0 <= j < len(self.times) and abs(self.times[j] - t) < 1e-9:
                r = self.records[j]
                return (r.x_um, r.y_um)
        # Fall back to linear interpolation between bracketing records.
        if i <= 0 or i >= len(self.times):
            raise DecodeFailure(f"no telemetry around t={t!r}")
        a, b = self.records[i - 1], self.records[i]
        frac = (t - a.t_s) / (b.t_s - a.t_s)
        return (a.x_um + frac * (b.x_um - a.x_um), a.y_um + frac * (b.y_um - a.y_um))


def _bursts(records: Sequence[TelemetryRecord]) -> list[int]:
    """Indices of the first wav-mode record of each burst."""
    starts = []
    prev_wav = False
    for i, r in enumerate(records):
        is_wav = r.mode == "wav"
        if is_wav and not prev_wav:
            starts.append(i)
        prev_wav = is_wav
    return starts


def _decode_burst(
    series: _PoseSeries,
    start_s: float,
    symbol_period_s: float,
    detector: str,
    axis: tuple[float, float] | None,
) -> UplinkDecodeResult:
    boundaries = [start_s + k * symbol_period_s for k in range(WAV_SYMBOLS + 1)]
    positions = [series.position(b) for b in boundaries]
    displacements = [
        (x1 - x0, y1 - y0) for (x0, y0), (x1, y1) in zip(positions, positions[1:])
    ]

    if detector == "magnitude":
        scores = [math.hypot(dx, dy) for dx, dy in displacements]
    elif detector == "projection":
        if axis is None:
            raise ValueError("projection detector requires an axis")
        norm = math.hypot(*axis)
        scores = [(dx * axis[0] + dy * axis[1]) / norm for dx, dy in displacements]
    else:
        raise ValueError(f"unknown detector {detector!r}")

    # Manchester guarantees exactly 8 high and 8 low half-bits.
    order = sorted(range(WAV_SYMBOLS), key=lambda k: (scores[k], k))
    high = set(order[WAV_SYMBOLS // 2 :])
    levels = [k in high for k in range(WAV_SYMBOLS)]

    bits = []
    for b in range(8):
        first, second = levels[2 * b], levels[2 * b + 1]
        if (first, second) == (False, True):
            bits.append(1)
        elif (first, second) == (True, False):
            bits.append(0)
        else:
            raise DecodeFailure("no mid-bit transition", symbol_index=2 * b)
    value = 0
    for bit in bits:
        value = (value << 1) | bit
    return UplinkDecodeResult(
        bits=tuple(bits),
        value=value,
        temperature_c=dequantize_temperature(value),
        symbol_boundaries=tuple(boundaries),
        start_s=start_s,
    )


def decode_all_uplinks(
    records: Sequence[TelemetryRecord],
    symbol_period_s: float,
    detector: str = "magnitude",
    axis: tuple[float, float] | None = None,
) -> list[UplinkDecodeResult]:
    """Decode every wav burst in one robot's telemetry."""
    if len(records) < 2:
        raise DecodeFailure("telemetry too short")
    ids = {r.robot_id for r in records}
    if len(ids) != 1:
        raise ValueError(f"telemetry mixes robots {sorted(ids)}; filter to one")
    tick = records[1].t_s - records[0].t_s
    series = _PoseSeries(records)
    results = []
    for i in _bursts(records):
        # The record at the burst's first wav tick samples one tick after the
        # instruction issued, so the burst started one tick earlier.
        start = records[i].t_s - tick
        results.append(_decode_burst(series, start, symbol_period_s, detector, axis))
    return results


def decode_uplink(
    records: Sequence[TelemetryRecord],
    symbol_period_s: float,
    detector: str = "magnitude",
    axis: tuple[float, float] | None = None,
) -> UplinkDecodeResult:
    """Decode the first wav burst in one robot's telemetry."""
    results = decode_all_uplinks(records, symbol_period_s, detector, axis)
    if not results:
        raise DecodeFailure("no wav activity in telemetry")
    return results[0]
