// Program templates preloaded into the editor; these mirror the reference
// programs shipped with the base station under programs/.

export interface ProgramTemplate {
  name: string;
  label: string;
  source: string;
}

export const TEMPLATES: ProgramTemplate[] = [
  {
    name: "default",
    label: "Power-on default (oscillate + pause)",
    source: `; Power-on default: 32 oscillations between front and rear drive, then a
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
`,
  },
  {
    name: "temperature_report",
    label: "Temperature report (motion telemetry)",
    source: `; Temperature telemetry: hold a motionless base drive and periodically
; modulate the front-right electrode with the Manchester-encoded reading.
start:  li   15, r0
        sll  r0, 4          ; r0 = 0xf0: all enabled, all negative (no motion)
        sb   r0, m15
loop:   ts   m0             ; sample the sensor into m0
        wav  m0, 1          ; 16 half-bit symbols on the front-right electrode
        mot  40             ; quiet gap between reports
        j    loop
`,
  },
  {
    name: "thermotaxis",
    label: "Thermotaxis (arc when colder, pivot when warm)",
    source: `; Gradient climbing: arc to explore while the current reading is colder
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
`,
  },
];

export function templateByName(name: string): ProgramTemplate | undefined {
  return TEMPLATES.find((t) => t.name === name);
}
