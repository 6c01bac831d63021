"""Software twin of a light-programmable electrokinetic microrobot.

Modules: `isa` (11-bit instruction set), `asm` (assembler/disassembler),
`core` (cycle-level emulator), `optical` (downlink and power gating),
`physics` (locomotion, thermal field, sensor, clock), `programs` (shipped
reference programs), and `station` (scenario runner, telemetry decoding,
exports, CLI, live session service).
"""

from .isa import Instruction, decode, encode
from .physics import BodyPose, ElectrodeConfig, RobotParams, Twist

__all__ = [
    "Instruction",
    "encode",
    "decode",
    "ElectrodeConfig",
    "BodyPose",
    "Twist",
    "RobotParams",
]
