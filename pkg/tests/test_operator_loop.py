"""Operator-loop integration: the console workflow against a live session.

The browser console's rendering and message construction are covered by its
own test suite (frontend/, vitest). Here the same protocol messages the UI
emits drive a real served session over the TCP transport: load the
thermotaxis program, watch the robot settle into its pivot, flip the
gradient, and see the behavioral transition arrive in the snapshot stream;
a bad program comes back as inline line-numbered diagnostics.
"""

import asyncio
import json
import pathlib

import pytest

from microbot import programs
from microbot.station.scenario import parse_scenario
from microbot.station.service import SessionEngine, serve_tcp

REPO = pathlib.Path(__file__).resolve().parent.parent

ARC, PIVOT = 0x2, 0x6


def live_scenario():
    return parse_scenario(
        {
            "arena": {"width_um": 120000, "height_um": 120000},
            "field": {"kind": "linear_gradient", "t0_c": 30.0,
                      "grad_c_per_mm": [0.1, 0.0], "origin_um": [0.0, 0.0], "sign": 1},
            "robots": [
                {"id": 1, "type_code": 1, "size_variant": "large", "noise_c": 0.0,
                 "pose0": {"x_um": 10000, "y_um": 0, "theta_deg": 170}, "seed": 5,
                 "mobility_scale": 20.0}
            ],
            "light": {"power_wm2": 600, "comms_wm2": 1000, "clock_hz": 4},
            "tick_s": 0.25,
            "duration_s": 10000.0,
        }
    )


def test_frontend_templates_match_shipped_programs():
    templates = (REPO / "frontend" / "src" / "templates.ts").read_text()
    for name, source in programs.REFERENCE_SOURCES.items():
        assert source in templates, f"frontend template for {name} drifted"


def test_frontend_bundle_is_built():
    dist = REPO / "frontend" / "dist"
    assert (dist / "index.html").exists(), "run `npm run build` in frontend/"


async def _operator_session():
    engine = SessionEngine(live_scenario())
    server = await serve_tcp(engine, "127.0.0.1", 0)
    port = server.sockets[0].getsockname()[1]
    loop_task = asyncio.create_task(engine.loop(interval_s=0.002))
    reader, writer = await asyncio.open_connection("127.0.0.1", port)

    async def recv():
        return json.loads(await asyncio.wait_for(reader.readline(), timeout=30))

    def send(obj):
        writer.write(json.dumps(obj).encode() + b"\n")

    async def wait_for(predicate):
        while True:
            msg = await recv()
            if predicate(msg):
                return msg

    try:
        await recv()  # greeting snapshot

        # Assembler errors surface with line numbers (rendered inline by the UI).
        send({"type": "load_program", "target": "global",
              "source": "li 5, r0\nfrob r0\n", "clock_lock": False})
        asm_error = await wait_for(lambda m: m["type"] == "asm_error")
        assert asm_error["errors"][0]["line"] == 2

        # Exactly the message the console's send button produces.
        send({"type": "load_program", "target": "global",
              "source": programs.REFERENCE_SOURCES["thermotaxis"],
              "clock_lock": False})
        await wait_for(lambda m: m["type"] == "ack" and m["cmd"] == "load_program")

        send({"type": "set_speed", "multiplier": 400})
        await wait_for(lambda m: m["type"] == "ack" and m["cmd"] == "set_speed")

        # Program is delivered optically, then the robot settles into its pivot.
        await wait_for(
            lambda m: m["type"] == "snapshot"
            and m["robots"][0]["polarity_mask"] == PIVOT
        )

        send({"type": "set_field_sign", "sign": -1})
        await wait_for(lambda m: m["type"] == "ack" and m["cmd"] == "set_field_sign")
        flip_snap = await wait_for(lambda m: m["type"] == "snapshot")
        flip_t = flip_snap["t_s"]

        arc_snap = await wait_for(
            lambda m: m["type"] == "snapshot"
            and m["robots"][0]["polarity_mask"] == ARC
        )
        # One sensing period of the control loop is ~4 s of simulated time;
        # the transition shows up in the very next snapshots after that.
        assert arc_snap["t_s"] - flip_t <= 6.0
        return True
    finally:
        writer.close()
        loop_task.cancel()
        server.close()


def test_operator_loop_thermotaxis_over_live_session():
    assert asyncio.run(_operator_session())
