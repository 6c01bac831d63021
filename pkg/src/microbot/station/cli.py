"""Command-line front end.

    microbot assemble prog.asm [-o prog.hex]
    microbot disasm prog.hex
    microbot run scenario.json [--out DIR] [--seed N]
    microbot decode-uplink telemetry.csv --period 0.25 [--robot ID]
    microbot serve scenario.json --port 8765 [--tcp-port 8766] [--seed N]
    microbot pareto-table

Set MICROBOT_LOG=debug (or info/warning) for logging.
"""

from __future__ import annotations

import argparse
import asyncio
import importlib.resources
import logging
import os
import sys

from .. import asm, isa
from . import export, service, uplink
from .scenario import ConfigError, load_scenario


def _setup_logging() -> None:
    level = os.environ.get("MICROBOT_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")


def _cmd_assemble(args) -> int:
    with open(args.source, "r", encoding="utf-8") as fh:
        source = fh.read()
    try:
        image = asm.assemble(source)
    except asm.AsmError as exc:
        for line, message in exc.problems:
            print(f"{args.source}:{line}: {message}", file=sys.stderr)
        return 1
    text = asm.format_image(image)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"{len(image.words)} words -> {args.output}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_disasm(args) -> int:
    with open(args.image, "r", encoding="utf-8") as fh:
        image = asm.parse_image(fh.read())
    try:
        sys.stdout.write(asm.disassemble(image))
    except isa.IllegalOpcode as exc:
        print(f"{args.image}: {exc}", file=sys.stderr)
        return 1
    return 0


def _cmd_run(args) -> int:
    from .runner import run_scenario

    try:
        scenario = load_scenario(args.scenario)
    except ConfigError as exc:
        print(f"{args.scenario}: {exc}", file=sys.stderr)
        return 1
    result = run_scenario(scenario, master_seed=args.seed)
    out_dir = args.out or "."
    paths = export.write_logs(out_dir, result.telemetry, result.events)
    print(f"{len(result.telemetry)} records -> {paths['csv']}, {paths['json']}")
    return 0


def _cmd_decode_uplink(args) -> int:
    with open(args.telemetry, "r", encoding="utf-8") as fh:
        records = export.telemetry_from_csv(fh.read())
    if args.robot is not None:
        records = [r for r in records if r.robot_id == args.robot]
    if not records:
        print("no matching telemetry records", file=sys.stderr)
        return 1
    ids = {r.robot_id for r in records}
    if len(ids) > 1:
        print(f"telemetry holds robots {sorted(ids)}; pick one with --robot", file=sys.stderr)
        return 1
    try:
        results = uplink.decode_all_uplinks(records, args.period, detector=args.detector)
    except uplink.DecodeFailure as exc:
        print(f"decode failed: {exc}", file=sys.stderr)
        return 1
    print("t_start_s,value,temperature_c,bits")
    for r in results:
        bits = "".join(str(b) for b in r.bits)
        print(f"{r.start_s!r},{r.value},{r.temperature_c!r},{bits}")
    return 0


def _cmd_serve(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except ConfigError as exc:
        print(f"{args.scenario}: {exc}", file=sys.stderr)
        return 1
    print(f"console backend on http://{args.host}:{args.port}/ "
          f"(websocket /ws, tcp {args.tcp_port or args.port + 1})")
    try:
        asyncio.run(
            service.serve_session(
                scenario, args.port, args.tcp_port, master_seed=args.seed, host=args.host
            )
        )
    except KeyboardInterrupt:
        pass
    return 0


def _cmd_pareto_table(args) -> int:
    data = (
        importlib.resources.files("microbot.station")
        .joinpath("data/peer_sensors.csv")
        .read_text(encoding="utf-8")
    )
    rows = [
        line.split(",")
        for line in data.splitlines()
        if line and not line.startswith("#")
    ]
    header, body = rows[0], rows[1:]
    body.sort(key=lambda r: float(r[1]))
    if args.csv:
        print(",".join(header))
        for row in body:
            print(",".join(row))
        return 0
    widths = [max(len(h), *(len(r[i]) for r in body)) for i, h in enumerate(header)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for row in body:
        marker = " <-" if row[0] == "this_work" else ""
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)) + marker)
    return 0


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = argparse.ArgumentParser(prog="microbot", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assemble", help="assemble source to an 11-bit hex image")
    p.add_argument("source")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_assemble)

    p = sub.add_parser("disasm", help="disassemble a hex image to canonical source")
    p.add_argument("image")
    p.set_defaults(func=_cmd_disasm)

    p = sub.add_parser("run", help="run a scenario headless and export telemetry")
    p.add_argument("scenario")
    p.add_argument("--out", help="output directory (default .)")
    p.add_argument("--seed", type=int, default=0, help="master seed mixed into robot seeds")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("decode-uplink", help="decode wav bursts from a telemetry CSV")
    p.add_argument("telemetry")
    p.add_argument("--period", type=float, required=True, help="symbol period in seconds")
    p.add_argument("--robot", type=int, help="robot id to decode")
    p.add_argument("--detector", choices=("magnitude", "projection"), default="magnitude")
    p.set_defaults(func=_cmd_decode_uplink)

    p = sub.add_parser("serve", help="serve a live session (websocket + tcp)")
    p.add_argument("scenario")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--tcp-port", type=int, default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("pareto-table", help="print the peer sensor accuracy/volume table")
    p.add_argument("--csv", action="store_true", help="emit raw CSV")
    p.set_defaults(func=_cmd_pareto_table)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
