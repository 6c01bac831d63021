"""Instruction set for the onboard 11-bit CISC processor.

Machine resources visible to programs:

  - 4 x 8-bit register file          r0..r3
  - 16 x 8-bit data memory           m0..m15   (m15 is the actuator config port)
  - 32 x 11-bit instruction memory
  - flag bits eq/ne/gt/lt set by cmp/cmpi

Word layout (11 bits): 5-bit opcode in bits [10:6], operand fields packed
MSB-first into bits [5:0] in the order the operands are written. Unused low
bits must be zero; a word with non-zero padding or an unassigned opcode is
not a legal instruction.

  mnem   opcode  operand fields (width)        meaning
  mov    0       rx(2) ry(2)                   ry = rx
  mot    1       n(6)                          hold actuator drive n periods, n in 1..63
  wav    2       mx(4) grp(2)                  Manchester-modulate electrode grp with dmem[mx]
  ts     3       mx(4)                         dmem[mx] = temperature code
  sb     4       rx(2) mx(4)                   dmem[mx] = rx
  lb     5       mx(4) rx(2)                   rx = dmem[mx]
  li     6       imm(4) rx(2)                  rx = imm
  add    7       rx(2) ry(2) rz(2)             rz = rx + ry
  addi   8       rx(2) imm(2) rz(2)            rz = rx + imm
  sub    9       rx(2) ry(2) rz(2)             rz = rx - ry
  subi   10      rx(2) imm(2) rz(2)            rz = rx - imm
  and    11      rx(2) ry(2) rz(2)             rz = rx & ry
  or     12      rx(2) ry(2) rz(2)             rz = rx | ry
  sll    13      rx(2) sh(3)                   rx = rx << sh
  srl    14      rx(2) sh(3)                   rx = rx >> sh
  j      15      a(5)                          pc = a
  bcnt   16      off(3) n(3)                   loop back off words, n extra passes
  cmp    17      rx(2) ry(2)                   set flags from rx ? ry
  cmpi   18      rx(2) imm(4)                  set flags from rx ? imm
  beq    19      off(6)                        pc += off if eq
  bne    20      off(6)                        pc += off if ne
  bgt    21      off(6)                        pc += off if gt
  blt    22      off(6)                        pc += off if lt

Arithmetic wraps modulo 256 and comparisons are unsigned. Branch offsets are
unsigned magnitudes: the conditional branches jump forward, bcnt jumps
backward. Opcode 0 is mov so that the all-zero word is a harmless
`mov r0, r0`; a processor running off the end of a program idles rather
than wedging.
"""

from __future__ import annotations

from dataclasses import dataclass

WORD_BITS = 11
WORD_COUNT = 1 << WORD_BITS
NUM_REGS = 4
DMEM_SIZE = 16
IMEM_SIZE = 32

# Memory-mapped actuator configuration port: a store to this address also
# latches the electrode config (high nibble = enable, low nibble = polarity).
ACTUATOR_PORT = 15


class IsaError(Exception):
    """Base class for instruction-level errors."""


class OperandOutOfRange(IsaError):
    """An operand does not fit its field or violates its declared range."""


class IllegalOpcode(IsaError):
    """A word does not decode to any legal instruction."""


# Operand field kinds: (symbolic name, bit width).
REG = ("reg", 2)
MEM = ("mem", 4)
ADDR = ("addr", 5)
GRP = ("grp", 2)
SH = ("sh", 3)
IMM2 = ("imm", 2)
IMM4 = ("imm", 4)
OFF3 = ("off", 3)
OFF6 = ("off", 6)
CNT3 = ("cnt", 3)
CNT6 = ("cnt", 6)

# mnemonic -> (opcode, operand field list). Field order is operand order.
FORMATS: dict[str, tuple[int, tuple[tuple[str, int], ...]]] = {
    "mov":  (0,  (REG, REG)),
    "mot":  (1,  (CNT6,)),
    "wav":  (2,  (MEM, GRP)),
    "ts":   (3,  (MEM,)),
    "sb":   (4,  (REG, MEM)),
    "lb":   (5,  (MEM, REG)),
    "li":   (6,  (IMM4, REG)),
    "add":  (7,  (REG, REG, REG)),
    "addi": (8,  (REG, IMM2, REG)),
    "sub":  (9,  (REG, REG, REG)),
    "subi": (10, (REG, IMM2, REG)),
    "and":  (11, (REG, REG, REG)),
    "or":   (12, (REG, REG, REG)),
    "sll":  (13, (REG, SH)),
    "srl":  (14, (REG, SH)),
    "j":    (15, (ADDR,)),
    "bcnt": (16, (OFF3, CNT3)),
    "cmp":  (17, (REG, REG)),
    "cmpi": (18, (REG, IMM4)),
    "beq":  (19, (OFF6,)),
    "bne":  (20, (OFF6,)),
    "bgt":  (21, (OFF6,)),
    "blt":  (22, (OFF6,)),
}

MNEMONICS = tuple(FORMATS)
OPCODE_TO_MNEMONIC = {op: mnem for mnem, (op, _) in FORMATS.items()}

assert len(OPCODE_TO_MNEMONIC) == 23


def _field_range(mnemonic: str, kind: str, width: int) -> tuple[int, int]:
    # mot's count field excludes 0: driving the actuators for zero periods
    # has no canonical encoding, so the word is treated as illegal instead.
    if mnemonic == "mot":
        return 1, (1 << width) - 1
    return 0, (1 << width) - 1


@dataclass(frozen=True)
class Instruction:
    """One decoded instruction: mnemonic plus integer operands in listing order."""

    mnemonic: str
    operands: tuple[int, ...] = ()

    def __post_init__(self):
        if self.mnemonic not in FORMATS:
            raise OperandOutOfRange(f"unknown mnemonic {self.mnemonic!r}")
        _, fields = FORMATS[self.mnemonic]
        if len(self.operands) != len(fields):
            raise OperandOutOfRange(
                f"{self.mnemonic} takes {len(fields)} operand(s), got {len(self.operands)}"
            )
        for value, (kind, width) in zip(self.operands, fields):
            lo, hi = _field_range(self.mnemonic, kind, width)
            if not isinstance(value, int) or not lo <= value <= hi:
                raise OperandOutOfRange(
                    f"{self.mnemonic} {kind} operand {value!r} outside {lo}..{hi}"
                )


def ins(mnemonic: str, *operands: int) -> Instruction:
    """Shorthand constructor used heavily in tests and generated code."""
    return Instruction(mnemonic, tuple(operands))


def encode(instr: Instruction) -> int:
    """Pack an instruction into its unique 11-bit word."""
    opcode, fields = FORMATS[instr.mnemonic]
    word = opcode << 6
    shift = 6
    for value, (_, width) in zip(instr.operands, fields):
        shift -= width
        word |= value << shift
    return word


def decode(word: int) -> Instruction:
    """Unpack an 11-bit word; raises IllegalOpcode for anything non-canonical."""
    if not 0 <= word < WORD_COUNT:
        raise IllegalOpcode(f"word {word:#x} wider than 11 bits")
    opcode = word >> 6
    mnemonic = OPCODE_TO_MNEMONIC.get(opcode)
    if mnemonic is None:
        raise IllegalOpcode(f"unassigned opcode {opcode} in word {word:#06x}")
    _, fields = FORMATS[mnemonic]
    operands = []
    shift = 6
    for kind, width in fields:
        shift -= width
        operands.append((word >> shift) & ((1 << width) - 1))
    if word & ((1 << shift) - 1):
        raise IllegalOpcode(f"non-zero padding bits in word {word:#06x}")
    try:
        return Instruction(mnemonic, tuple(operands))
    except OperandOutOfRange as exc:
        raise IllegalOpcode(f"word {word:#06x}: {exc}") from exc
