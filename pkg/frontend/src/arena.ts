// Canvas arena: thermal-field color wash, robot trails, heading glyphs.

import type { FieldSummary, Snapshot, RobotSnapshot } from "./protocol";

const TRAIL_LIMIT = 600;
const ROBOT_COLORS = ["#4fc3f7", "#ffb74d", "#aed581", "#f06292", "#ba68c8", "#fff176"];

export function robotColor(id: number): string {
  return ROBOT_COLORS[Math.abs(id) % ROBOT_COLORS.length];
}

function fieldTemperature(field: FieldSummary, x_um: number, y_um: number, t_s: number): number {
  switch (field.kind) {
    case "uniform":
      return field.t0_c;
    case "warming_bath": {
      const tInf = field.t_inf_c ?? field.t0_c;
      const tau = field.tau_s ?? 1;
      return tInf + (field.t0_c - tInf) * Math.exp(-t_s / tau);
    }
    case "linear_gradient": {
      const [gx, gy] = field.grad_c_per_mm ?? [0, 0];
      const [ox, oy] = field.origin_um ?? [0, 0];
      const sign = field.sign ?? 1;
      return field.t0_c + sign * (gx * (x_um - ox) + gy * (y_um - oy)) / 1000;
    }
  }
}

// 10..40 C mapped cold-blue to warm-red.
function temperatureColor(t_c: number, alpha: number): string {
  const f = Math.min(Math.max((t_c - 10) / 30, 0), 1);
  const r = Math.round(40 + 200 * f);
  const b = Math.round(240 - 200 * f);
  return `rgba(${r},60,${b},${alpha})`;
}

export class ArenaView {
  private trails = new Map<number, { x: number; y: number }[]>();
  private lastT = -1;

  constructor(private readonly canvas: HTMLCanvasElement) {}

  clearTrails(): void {
    this.trails.clear();
  }

  render(snap: Snapshot, targeted: Set<number>): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    const arena = snap.arena;
    const scale = Math.min(width / arena.width_um, height / arena.height_um);
    const toPx = (x_um: number, y_um: number): [number, number] => [
      width / 2 + x_um * scale,
      height / 2 - y_um * scale, // world +y is up
    ];

    if (snap.t_s !== this.lastT) {
      this.lastT = snap.t_s;
      for (const robot of snap.robots) {
        let trail = this.trails.get(robot.id);
        if (!trail) {
          trail = [];
          this.trails.set(robot.id, trail);
        }
        trail.push({ x: robot.x_um, y: robot.y_um });
        if (trail.length > TRAIL_LIMIT) trail.shift();
      }
    }

    ctx.clearRect(0, 0, width, height);
    this.paintField(ctx, snap, toPx, scale);
    this.paintTrails(ctx, toPx);
    for (const robot of snap.robots) {
      this.paintRobot(ctx, robot, targeted.has(robot.id), toPx, scale);
    }
  }

  private paintField(
    ctx: CanvasRenderingContext2D,
    snap: Snapshot,
    toPx: (x: number, y: number) => [number, number],
    scale: number,
  ): void {
    const arena = snap.arena;
    const [left, top] = toPx(-arena.width_um / 2, arena.height_um / 2);
    const wPx = arena.width_um * scale;
    const hPx = arena.height_um * scale;
    if (snap.field.kind === "linear_gradient") {
      const steps = 24;
      for (let i = 0; i < steps; i++) {
        const x0 = -arena.width_um / 2 + (i * arena.width_um) / steps;
        const t = fieldTemperature(snap.field, x0 + arena.width_um / steps / 2, 0, snap.t_s);
        ctx.fillStyle = temperatureColor(t, 0.25);
        const [px] = toPx(x0, 0);
        ctx.fillRect(px, top, wPx / steps + 1, hPx);
      }
    } else {
      const t = fieldTemperature(snap.field, 0, 0, snap.t_s);
      ctx.fillStyle = temperatureColor(t, 0.2);
      ctx.fillRect(left, top, wPx, hPx);
    }
    ctx.strokeStyle = "#445";
    ctx.strokeRect(left, top, wPx, hPx);
  }

  private paintTrails(
    ctx: CanvasRenderingContext2D,
    toPx: (x: number, y: number) => [number, number],
  ): void {
    for (const [id, trail] of this.trails) {
      if (trail.length < 2) continue;
      ctx.strokeStyle = robotColor(id);
      ctx.globalAlpha = 0.5;
      ctx.beginPath();
      const [x0, y0] = toPx(trail[0].x, trail[0].y);
      ctx.moveTo(x0, y0);
      for (const p of trail) {
        const [x, y] = toPx(p.x, p.y);
        ctx.lineTo(x, y);
      }
      ctx.stroke();
      ctx.globalAlpha = 1;
    }
  }

  private paintRobot(
    ctx: CanvasRenderingContext2D,
    robot: RobotSnapshot,
    targeted: boolean,
    toPx: (x: number, y: number) => [number, number],
    scale: number,
  ): void {
    const [px, py] = toPx(robot.x_um, robot.y_um);
    const theta = (robot.theta_deg * Math.PI) / 180;
    // Body rectangle drawn at a visible floor size regardless of zoom.
    const len = Math.max(340 * scale, 14);
    const wid = Math.max(240 * scale, 9);
    ctx.save();
    ctx.translate(px, py);
    ctx.rotate(-theta);
    ctx.fillStyle = robotColor(robot.id);
    ctx.globalAlpha = robot.mode === "inert" ? 0.35 : 1;
    ctx.fillRect(-len / 2, -wid / 2, len, wid);
    // heading glyph
    ctx.beginPath();
    ctx.moveTo(len / 2 + 6, 0);
    ctx.lineTo(len / 2 - 2, -wid / 2);
    ctx.lineTo(len / 2 - 2, wid / 2);
    ctx.closePath();
    ctx.fillStyle = "#fff";
    ctx.fill();
    if (targeted) {
      ctx.strokeStyle = "#ffee58";
      ctx.lineWidth = 2;
      ctx.strokeRect(-len / 2 - 3, -wid / 2 - 3, len + 6, wid + 6);
    }
    ctx.restore();
    ctx.globalAlpha = 1;
    ctx.fillStyle = "#ccc";
    ctx.font = "11px sans-serif";
    ctx.fillText(`#${robot.id} t${robot.type_code} ${robot.mode}`, px + 10, py - 10);
  }
}
