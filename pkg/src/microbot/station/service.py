"""Live session service: one simulation loop, streamed to operator consoles.

The protocol is bidirectional JSON text messages over a single socket.
Server messages all carry a per-connection monotonically increasing `seq`:

    {"type": "snapshot", "seq": n, "t_s": ..., "paused": ..., "multiplier": ...,
     "arena": {...}, "field": {...}, "robots": [{...}, ...]}
    {"type": "ack", "seq": n, "cmd": "..."}
    {"type": "asm_error", "seq": n, "errors": [{"line": n, "message": "..."}]}
    {"type": "error", "seq": n, "message": "..."}

Client messages:

    {"type": "load_program", "target": "global"|<type int>, "source": "...",
     "clock_lock": false}
    {"type": "set_field_sign", "sign": 1|-1}
    {"type": "set_intensity", "power_wm2": x, "comms_wm2": y}
    {"type": "pause"} {"type": "resume"} {"type": "set_speed", "multiplier": x}
    {"type": "set_decimation", "every": k}

Programs are assembled server-side; syntax errors come back as `asm_error`
with line numbers and leave the simulation untouched. Commands mutate the
world between ticks, in arrival order. Two transports speak the protocol:
newline-delimited JSON over plain TCP, and WebSocket text frames (for the
browser console) served by FastAPI together with the static UI bundle.
"""

from __future__ import annotations

import asyncio
import json
import logging
import os
import time
from collections import deque

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from .. import asm
from .runner import Simulation
from .scenario import Scenario, SendFrame, field_summary

log = logging.getLogger("microbot.service")

MAX_TICKS_PER_BATCH = 5000


class SessionEngine:
    """Owns the simulation; transports subscribe for snapshots and post commands."""

    def __init__(self, scenario: Scenario, master_seed: int = 0):
        self.scenario = scenario
        self.sim = Simulation(scenario, master_seed)
        self.paused = False
        self.multiplier = 1.0
        self.decimation = 1
        self.subscribers: set[asyncio.Queue] = set()
        self._commands: deque[dict] = deque()
        self._debt_s = 0.0
        self._last_snapshot_tick = -1

    # -- protocol ----------------------------------------------------------

    def snapshot(self) -> dict:
        sim = self.sim
        robots = []
        for robot in sim.robots:
            robots.append(
                {
                    "id": robot.spec.id,
                    "type_code": robot.spec.type_code,
                    "x_um": robot.pose.x,
                    "y_um": robot.pose.y,
                    "theta_deg": robot.pose.theta,
                    "mode": robot.mode_string(),
                    "enable_mask": robot.effective_cfg.enable,
                    "polarity_mask": robot.effective_cfg.polarity,
                    "temp_code": robot.last_temp_code,
                }
            )
        return {
            "type": "snapshot",
            "t_s": sim.now,
            "paused": self.paused,
            "multiplier": self.multiplier,
            "tick_s": sim.tick_s,
            "arena": {
                "width_um": self.scenario.arena_um[0],
                "height_um": self.scenario.arena_um[1],
            },
            "field": field_summary(sim.field),
            "robots": robots,
        }

    def handle_command(self, msg: dict) -> dict:
        """Validate and apply/queue one client command; returns the reply body."""
        kind = msg.get("type")
        if kind == "load_program":
            source = msg.get("source")
            if not isinstance(source, str):
                return {"type": "error", "message": "load_program needs source text"}
            target = msg.get("target", "global")
            if target != "global" and not isinstance(target, int):
                return {"type": "error", "message": 'target must be "global" or a type code'}
            try:
                words = asm.assemble(source).words
            except asm.AsmError as exc:
                return {
                    "type": "asm_error",
                    "errors": [{"line": n, "message": m} for n, m in exc.problems],
                }
            self._commands.append(
                {
                    "apply": "send_frame",
                    "target": target,
                    "source": source,
                    "words": words,
                    "clock_lock": bool(msg.get("clock_lock", False)),
                }
            )
            return {"type": "ack", "cmd": "load_program", "words": len(words)}
        if kind == "set_field_sign":
            sign = msg.get("sign")
            if sign not in (-1, 1):
                return {"type": "error", "message": "sign must be +1 or -1"}
            if not hasattr(self.sim.field, "sign"):
                return {"type": "error", "message": "scenario field has no gradient to flip"}
            self._commands.append({"apply": "set_field_sign", "sign": sign})
            return {"type": "ack", "cmd": "set_field_sign"}
        if kind == "set_intensity":
            try:
                power = float(msg["power_wm2"])
                comms = float(msg["comms_wm2"])
            except (KeyError, TypeError, ValueError):
                return {"type": "error", "message": "set_intensity needs power_wm2 and comms_wm2"}
            self._commands.append({"apply": "set_intensity", "power": power, "comms": comms})
            return {"type": "ack", "cmd": "set_intensity"}
        if kind == "pause":
            self.paused = True
            return {"type": "ack", "cmd": "pause"}
        if kind == "resume":
            self.paused = False
            return {"type": "ack", "cmd": "resume"}
        if kind == "set_speed":
            try:
                multiplier = float(msg["multiplier"])
            except (KeyError, TypeError, ValueError):
                return {"type": "error", "message": "set_speed needs a multiplier"}
            if not 0 < multiplier <= 1e6:
                return {"type": "error", "message": "multiplier out of range"}
            self.multiplier = multiplier
            return {"type": "ack", "cmd": "set_speed"}
        if kind == "set_decimation":
            every = msg.get("every")
            if not isinstance(every, int) or every < 1:
                return {"type": "error", "message": "set_decimation needs integer every >= 1"}
            self.decimation = every
            return {"type": "ack", "cmd": "set_decimation"}
        return {"type": "error", "message": f"unknown message type {kind!r}"}

    # -- stepping ----------------------------------------------------------

    def _apply_commands(self) -> None:
        while self._commands:
            cmd = self._commands.popleft()
            t0 = self.sim.now
            if cmd["apply"] == "send_frame":
                action = SendFrame(
                    t_s=t0,
                    target=cmd["target"],
                    source=cmd["source"],
                    words=cmd["words"],
                    clock_lock=cmd["clock_lock"],
                )
                self.sim._start_transmission(action, t0)
            elif cmd["apply"] == "set_field_sign":
                self.sim.field.sign = cmd["sign"]
                self.sim.log_event(t0, None, f"field sign set to {cmd['sign']:+d}")
            elif cmd["apply"] == "set_intensity":
                self.sim.power_wm2 = cmd["power"]
                self.sim.comms_wm2 = cmd["comms"]

    def advance(self, wall_dt_s: float) -> int:
        """Advance simulated time to match wall_dt at the current multiplier."""
        self._apply_commands()
        if self.paused:
            return 0
        self._debt_s += wall_dt_s * self.multiplier
        ticks = int(self._debt_s / self.sim.tick_s)
        if ticks <= 0:
            return 0
        ticks = min(ticks, MAX_TICKS_PER_BATCH)
        self._debt_s -= ticks * self.sim.tick_s
        for _ in range(ticks):
            self.sim.tick()
        # Telemetry grows without bound in long sessions; keep a sliding window.
        if len(self.sim.telemetry) > 500_000:
            del self.sim.telemetry[: len(self.sim.telemetry) // 2]
        return ticks

    def maybe_broadcast(self) -> None:
        tick = self.sim.tick_index
        if tick == self._last_snapshot_tick:
            return
        if tick % self.decimation and tick != 0:
            return
        self._last_snapshot_tick = tick
        snap = self.snapshot()
        for queue in list(self.subscribers):
            if queue.qsize() < 100:
                queue.put_nowait(snap)

    async def loop(self, interval_s: float = 0.02) -> None:
        last = time.monotonic()
        while True:
            await asyncio.sleep(interval_s)
            now = time.monotonic()
            self.advance(now - last)
            last = now
            self.maybe_broadcast()


# ---------------------------------------------------------------------------
# TCP transport (newline-delimited JSON)


async def _tcp_connection(engine: SessionEngine, reader, writer) -> None:
    peer = writer.get_extra_info("peername")
    log.info("console connected: %s", peer)
    seq = 0
    queue: asyncio.Queue = asyncio.Queue()
    engine.subscribers.add(queue)

    def send(payload: dict) -> None:
        nonlocal seq
        payload = dict(payload)
        payload["seq"] = seq
        seq += 1
        writer.write(json.dumps(payload, sort_keys=True).encode() + b"\n")

    send(engine.snapshot())

    async def pump_snapshots():
        while True:
            snap = await queue.get()
            send(snap)
            await writer.drain()

    pump = asyncio.create_task(pump_snapshots())
    try:
        while True:
            line = await reader.readline()
            if not line:
                break
            try:
                msg = json.loads(line)
                if not isinstance(msg, dict):
                    raise ValueError("message must be an object")
            except ValueError as exc:
                send({"type": "error", "message": f"malformed message: {exc}"})
                continue
            send(engine.handle_command(msg))
            await writer.drain()
    finally:
        pump.cancel()
        engine.subscribers.discard(queue)
        writer.close()
        log.info("console disconnected: %s", peer)


async def serve_tcp(engine: SessionEngine, host: str, port: int):
    return await asyncio.start_server(
        lambda r, w: _tcp_connection(engine, r, w), host, port
    )


# ---------------------------------------------------------------------------
# WebSocket + static UI transport


def build_app(engine: SessionEngine, ui_dir: str | None = None):
    app = FastAPI(title="microbot console backend")

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        seq = 0
        queue: asyncio.Queue = asyncio.Queue()
        engine.subscribers.add(queue)

        async def send(payload: dict):
            nonlocal seq
            payload = dict(payload)
            payload["seq"] = seq
            seq += 1
            await ws.send_text(json.dumps(payload, sort_keys=True))

        await send(engine.snapshot())

        async def pump():
            while True:
                await send(await queue.get())

        pump_task = asyncio.create_task(pump())
        try:
            while True:
                text = await ws.receive_text()
                try:
                    msg = json.loads(text)
                    if not isinstance(msg, dict):
                        raise ValueError("message must be an object")
                except ValueError as exc:
                    await send({"type": "error", "message": f"malformed message: {exc}"})
                    continue
                await send(engine.handle_command(msg))
        except WebSocketDisconnect:
            pass
        finally:
            pump_task.cancel()
            engine.subscribers.discard(queue)

    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app


def default_ui_dir() -> str | None:
    """Locate the built frontend bundle when running from a source checkout."""
    here = os.path.dirname(os.path.abspath(__file__))
    for base in (os.getcwd(), os.path.join(here, "..", "..", "..")):
        candidate = os.path.abspath(os.path.join(base, "frontend", "dist"))
        if os.path.isdir(candidate):
            return candidate
    return None


async def serve_session(
    scenario: Scenario,
    port: int,
    tcp_port: int | None = None,
    master_seed: int = 0,
    host: str = "127.0.0.1",
) -> None:
    """Run the engine plus both transports until cancelled."""
    import uvicorn

    engine = SessionEngine(scenario, master_seed)
    app = build_app(engine, default_ui_dir())
    config = uvicorn.Config(app, host=host, port=port, log_level="warning")
    server = uvicorn.Server(config)
    tcp = await serve_tcp(engine, host, tcp_port if tcp_port is not None else port + 1)
    log.info("console: http://%s:%d/  tcp: %d", host, port, tcp_port or port + 1)
    loop_task = asyncio.create_task(engine.loop())
    try:
        await server.serve()
    finally:
        loop_task.cancel()
        tcp.close()
