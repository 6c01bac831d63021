"""Reference programs shipped with the twin.

Three programs cover the robot's standard repertoire:

  * default            power-on behavior: 32 front/rear oscillations and a
                       pause, repeated forever; its cycle time is the
                       temperature signature used to check a robot is alive
  * temperature report sample the sensor and Manchester-modulate the
                       front-right electrode so the base station can read
                       the value back out of the robot's motion
  * thermotaxis        arc to explore while the reading is colder than a
                       reference; pivot in place and refresh the reference
                       once at least as warm

The same sources live under programs/ at the repository root with golden
assembled images; tests pin both against this module.
"""

from __future__ import annotations

from functools import lru_cache

from . import asm

# Cycles consumed by one full pass of the default program (setup + 32
# oscillations + pause). The onboard clock is specified by how long this
# loop takes at a given temperature, so the per-instruction period is the
# loop time divided by this count.
DEFAULT_LOOP_CYCLES = 398

DEFAULT_SOURCE = """\
; Power-on default: 32 oscillations between front and rear drive, then a
; pause of roughly a third of the loop, repeated forever.
start:  li   15, r0
        sll  r0, 4          ; r0 = 0xf0: all electrodes enabled, all negative
        li   12, r1
        add  r0, r1, r1     ; r1 = 0xfc: rear pair positive
        addi r0, 3, r0      ; r0 = 0xf3: front pair positive
        li   0, r2          ; oscillation counter
        li   2, r3
        sll  r3, 4          ; r3 = 32
osc:    sb   r0, m15        ; front drive
        mot  1
        sb   r1, m15        ; rear drive
        mot  1
        addi r2, 1, r2
        cmp  r2, r3
        beq  pause
        j    osc
pause:  li   0, r2
        sb   r2, m15        ; disable the actuators
        mot  63
        mot  63
        mot  6
        j    start
"""

TEMPERATURE_REPORT_SOURCE = """\
; Temperature telemetry: hold a motionless base drive and periodically
; modulate the front-right electrode with the Manchester-encoded reading.
start:  li   15, r0
        sll  r0, 4          ; r0 = 0xf0: all enabled, all negative (no motion)
        sb   r0, m15
loop:   ts   m0             ; sample the sensor into m0
        wav  m0, 1          ; 16 half-bit symbols on the front-right electrode
        mot  40             ; quiet gap between reports
        j    loop
"""

THERMOTAXIS_SOURCE = """\
; Gradient climbing: arc to explore while the current reading is colder
; than the reference; once at least as warm, pivot in place and make the
; new reading the reference.
start:  li   15, r0
        sll  r0, 4          ; r0 = 0xf0
        addi r0, 2, r1      ; r1 = 0xf2: front-right positive only -> arc
        li   4, r2
        add  r1, r2, r0     ; r0 = 0xf6: diagonal pair positive -> pivot
        ts   m0
        lb   m0, r3         ; r3 = reference reading
loop:   ts   m0
        lb   m0, r2         ; r2 = current reading
        cmp  r2, r3
        blt  colder
        sb   r0, m15        ; at least as warm: pivot and refresh reference
        mov  r2, r3
        j    hold
colder: sb   r1, m15        ; colder than reference: arc
hold:   mot  50
        j    loop
"""

REFERENCE_SOURCES = {
    "default": DEFAULT_SOURCE,
    "temperature_report": TEMPERATURE_REPORT_SOURCE,
    "thermotaxis": THERMOTAXIS_SOURCE,
}


@lru_cache(maxsize=None)
def reference_image(name: str) -> asm.ProgramImage:
    return asm.assemble(REFERENCE_SOURCES[name])


def default_image() -> asm.ProgramImage:
    return reference_image("default")
