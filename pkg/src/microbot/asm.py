"""Two-pass assembler and disassembler for the 11-bit instruction set.

Source syntax, one instruction per line:

    ; comment
    start:  li   15, r0      ; optional label, operands comma-separated
            sll  r0, 4
            sb   r0, m15
            beq  done        ; forward branches take a label or +N
            bcnt start, 3    ; backward loop takes a label or -N
    done:   j    start       ; jump takes a label or an absolute address

Registers are r0..r3, data memory m0..m15, immediates decimal or 0x hex.
Operands follow the order of the instruction listing in `isa` (source before
destination, e.g. `li 5, r0` loads 5 into r0). A program image is at most 32
words; together with the 16-byte data memory that is 32*11 + 16*8 = 480 bits
of programmable state.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import isa
from .isa import IMEM_SIZE, Instruction

_LABEL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class AsmError(Exception):
    """Assembly failed; .problems is a list of (line_number, message)."""

    def __init__(self, problems: list[tuple[int, str]]):
        self.problems = list(problems)
        super().__init__("; ".join(f"line {n}: {m}" for n, m in self.problems))


@dataclass(frozen=True)
class SourceLine:
    lineno: int
    label: str | None = None
    mnemonic: str | None = None
    operands: tuple[str, ...] = ()
    comment: str | None = None


@dataclass(frozen=True)
class ProgramImage:
    """Assembled machine words plus the load origin."""

    words: tuple[int, ...]
    origin: int = 0

    def __len__(self) -> int:
        return len(self.words)


def parse_source(text: str) -> list[SourceLine]:
    """Split source text into structured lines (labels kept with their line)."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        comment = None
        if ";" in raw:
            raw, comment = raw.split(";", 1)
            comment = comment.strip() or None
        raw = raw.strip()
        label = None
        if ":" in raw:
            label, raw = raw.split(":", 1)
            label = label.strip()
            raw = raw.strip()
        mnemonic = None
        operands: tuple[str, ...] = ()
        if raw:
            parts = raw.split(None, 1)
            mnemonic = parts[0].lower()
            if len(parts) > 1:
                operands = tuple(p.strip() for p in parts[1].split(","))
        if label is not None or mnemonic is not None or comment is not None:
            lines.append(SourceLine(lineno, label, mnemonic, operands, comment))
    return lines


def _parse_int(text: str) -> int:
    return int(text, 16) if text.lower().startswith(("0x", "-0x")) else int(text, 10)


class _Assembler:
    def __init__(self):
        self.problems: list[tuple[int, str]] = []
        self.labels: dict[str, int] = {}

    def fail(self, lineno: int, message: str):
        self.problems.append((lineno, message))

    def run(self, lines: list[SourceLine]) -> ProgramImage:
        # Pass 1: assign addresses, collect labels.
        addr = 0
        code: list[tuple[int, SourceLine]] = []
        for line in lines:
            if line.label is not None:
                if not _LABEL_RE.match(line.label):
                    self.fail(line.lineno, f"bad label {line.label!r}")
                elif line.label in self.labels:
                    self.fail(line.lineno, f"duplicate label {line.label!r}")
                else:
                    self.labels[line.label] = addr
            if line.mnemonic is not None:
                if addr >= IMEM_SIZE:
                    self.fail(
                        line.lineno,
                        f"program too long: instruction memory holds {IMEM_SIZE} words",
                    )
                    raise AsmError(self.problems)
                code.append((addr, line))
                addr += 1

        # Pass 2: resolve operands and encode.
        words = []
        for addr, line in code:
            word = self.encode_line(addr, line)
            words.append(word if word is not None else 0)
        if self.problems:
            raise AsmError(self.problems)
        return ProgramImage(tuple(words))

    def encode_line(self, addr: int, line: SourceLine) -> int | None:
        fmt = isa.FORMATS.get(line.mnemonic)
        if fmt is None:
            self.fail(line.lineno, f"unknown mnemonic {line.mnemonic!r}")
            return None
        _, fields = fmt
        if len(line.operands) != len(fields):
            self.fail(
                line.lineno,
                f"{line.mnemonic} takes {len(fields)} operand(s), got {len(line.operands)}",
            )
            return None
        values = []
        for text, (kind, width) in zip(line.operands, fields):
            value = self.parse_operand(addr, line, text, kind, width)
            if value is None:
                return None
            values.append(value)
        try:
            return isa.encode(Instruction(line.mnemonic, tuple(values)))
        except isa.OperandOutOfRange as exc:
            self.fail(line.lineno, str(exc))
            return None

    def parse_operand(
        self, addr: int, line: SourceLine, text: str, kind: str, width: int
    ) -> int | None:
        lineno = line.lineno
        try:
            if kind == "reg":
                m = re.fullmatch(r"[rR]([0-9]+)", text)
                if not m or not 0 <= int(m.group(1)) < isa.NUM_REGS:
                    raise ValueError(f"expected register r0..r3, got {text!r}")
                return int(m.group(1))
            if kind == "mem":
                m = re.fullmatch(r"[mM]([0-9]+)", text)
                if not m or not 0 <= int(m.group(1)) < isa.DMEM_SIZE:
                    raise ValueError(f"expected memory m0..m15, got {text!r}")
                return int(m.group(1))
            if kind == "addr":
                if _LABEL_RE.match(text):
                    return self.resolve_label(lineno, text)
                value = _parse_int(text)
                if not 0 <= value < IMEM_SIZE:
                    raise ValueError(f"jump target {value} outside 0..{IMEM_SIZE - 1}")
                return value
            if kind == "off":
                return self.parse_offset(addr, lineno, text, width)
            # imm / sh / cnt / grp: plain integer literal
            value = _parse_int(text)
            lo, hi = isa._field_range(line.mnemonic, kind, width)
            if not lo <= value <= hi:
                raise ValueError(f"{line.mnemonic} {kind} {value} outside {lo}..{hi}")
            return value
        except ValueError as exc:
            self.fail(lineno, str(exc))
            return None

    def parse_offset(self, addr: int, lineno: int, text: str, width: int) -> int | None:
        backward = width == 3  # bcnt loops backward; conditional branches forward
        limit = (1 << width) - 1
        if _LABEL_RE.match(text):
            target = self.resolve_label(lineno, text)
            if target is None:
                return None
            offset = addr - target if backward else target - addr
            direction = "backward" if backward else "forward"
            if offset < 0:
                self.fail(lineno, f"label {text!r} is not {direction} of address {addr}")
                return None
            if offset > limit:
                self.fail(lineno, f"{direction} offset {offset} exceeds {limit}")
                return None
            return offset
        try:
            value = _parse_int(text)
        except ValueError:
            self.fail(lineno, f"expected label or offset, got {text!r}")
            return None
        if backward:
            if text.lstrip().startswith("-"):
                value = -value
            if not 0 <= value <= limit:
                self.fail(lineno, f"backward offset {value} outside 0..{limit}")
                return None
            return value
        if not 0 <= value <= limit:
            self.fail(lineno, f"forward offset {value} outside 0..{limit}")
            return None
        return value

    def resolve_label(self, lineno: int, name: str) -> int | None:
        if name not in self.labels:
            self.fail(lineno, f"undefined label {name!r}")
            return None
        return self.labels[name]


def assemble(source: str) -> ProgramImage:
    """Assemble source text into a program image (raises AsmError on problems)."""
    return _Assembler().run(parse_source(source))


def _operand_text(
    mnemonic: str, addr: int, value: int, kind: str, width: int, labels: dict[int, str]
) -> str:
    if kind == "reg":
        return f"r{value}"
    if kind == "mem":
        return f"m{value}"
    if kind == "addr":
        return labels.get(value, str(value))
    if kind == "off":
        target = addr - value if width == 3 else addr + value
        if target in labels:
            return labels[target]
        return f"-{value}" if width == 3 else f"+{value}"
    return str(value)


def disassemble(image: ProgramImage) -> str:
    """Render an image as canonical source; assemble(disassemble(img)) == img.

    Branch and jump targets inside the image get synthetic labels; targets
    outside it fall back to numeric offsets so any decodable image round-trips.
    """
    instrs = []
    for index, word in enumerate(image.words):
        try:
            instrs.append(isa.decode(word))
        except isa.IllegalOpcode as exc:
            raise isa.IllegalOpcode(f"word {index}: {exc}") from exc

    targets = set()
    for addr, instr in enumerate(instrs):
        _, fields = isa.FORMATS[instr.mnemonic]
        for value, (kind, width) in zip(instr.operands, fields):
            if kind == "addr":
                targets.add(value)
            elif kind == "off":
                targets.add(addr - value if width == 3 else addr + value)
    labels = {t: f"L{t}" for t in sorted(targets) if 0 <= t < len(instrs)}

    lines = []
    for addr, instr in enumerate(instrs):
        _, fields = isa.FORMATS[instr.mnemonic]
        ops = ", ".join(
            _operand_text(instr.mnemonic, addr, v, k, w, labels)
            for v, (k, w) in zip(instr.operands, fields)
        )
        label = f"{labels[addr]}:" if addr in labels else ""
        body = f"{instr.mnemonic} {ops}".strip()
        lines.append(f"{label:<8}{body}")
    return "\n".join(lines) + ("\n" if lines else "")


def format_image(image: ProgramImage) -> str:
    """Hex dump, one 11-bit word per line."""
    return "".join(f"{w:#05x}\n" for w in image.words)


def parse_image(text: str) -> ProgramImage:
    """Inverse of format_image (blank lines and # comments ignored)."""
    words = []
    for raw in text.splitlines():
        raw = raw.split("#", 1)[0].strip()
        if raw:
            words.append(int(raw, 16))
    return ProgramImage(tuple(words))
