"""Telemetry persistence: CSV for spreadsheets, JSON for full fidelity.

Both formats are byte-stable for a given (scenario, seed): floats are
rendered with repr (shortest round-trip form) and key order is fixed.
"""

from __future__ import annotations

import json
import os
from typing import Sequence

from .runner import TelemetryRecord

CSV_HEADER = "t_s,robot_id,x_um,y_um,theta_deg,enable_mask,polarity_mask,mode,temp_code"


def telemetry_to_csv(records: Sequence[TelemetryRecord]) -> str:
    lines = [CSV_HEADER]
    for r in records:
        temp = "" if r.temp_code is None else str(r.temp_code)
        lines.append(
            f"{r.t_s!r},{r.robot_id},{r.x_um!r},{r.y_um!r},{r.theta_deg!r},"
            f"{r.enable},{r.polarity},{r.mode},{temp}"
        )
    return "\n".join(lines) + "\n"


def telemetry_from_csv(text: str) -> list[TelemetryRecord]:
    lines = text.strip().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("not a telemetry CSV (bad header)")
    records = []
    for line in lines[1:]:
        t, rid, x, y, theta, enable, polarity, mode, temp = line.split(",")
        records.append(
            TelemetryRecord(
                t_s=float(t),
                robot_id=int(rid),
                x_um=float(x),
                y_um=float(y),
                theta_deg=float(theta),
                enable=int(enable),
                polarity=int(polarity),
                mode=mode,
                temp_code=int(temp) if temp else None,
            )
        )
    return records


def telemetry_to_json(records: Sequence[TelemetryRecord], events: Sequence[str] = ()) -> str:
    payload = {
        "events": list(events),
        "records": [
            {
                "t_s": r.t_s,
                "robot_id": r.robot_id,
                "x_um": r.x_um,
                "y_um": r.y_um,
                "theta_deg": r.theta_deg,
                "enable_mask": r.enable,
                "polarity_mask": r.polarity,
                "mode": r.mode,
                "temp_code": r.temp_code,
                "tags": list(r.tags),
            }
            for r in records
        ],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def write_logs(out_dir: str, records: Sequence[TelemetryRecord], events: Sequence[str] = ()) -> dict:
    """Write telemetry.csv and telemetry.json under out_dir; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "csv": os.path.join(out_dir, "telemetry.csv"),
        "json": os.path.join(out_dir, "telemetry.json"),
    }
    with open(paths["csv"], "w", encoding="utf-8", newline="\n") as fh:
        fh.write(telemetry_to_csv(records))
    with open(paths["json"], "w", encoding="utf-8", newline="\n") as fh:
        fh.write(telemetry_to_json(records, events))
    return paths
