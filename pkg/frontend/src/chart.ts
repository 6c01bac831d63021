// Strip chart of decoded robot temperatures over simulated time.

import { robotColor } from "./arena";
import type { TempPoint } from "./state";

export class TempChart {
  constructor(private readonly canvas: HTMLCanvasElement) {}

  render(history: Map<number, TempPoint[]>, nowS: number, windowS = 600): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#10131a";
    ctx.fillRect(0, 0, width, height);

    const t1 = nowS;
    const t0 = Math.max(0, t1 - windowS);
    let tMin = Infinity;
    let tMax = -Infinity;
    for (const series of history.values()) {
      for (const p of series) {
        if (p.t_s < t0) continue;
        tMin = Math.min(tMin, p.temperature_c);
        tMax = Math.max(tMax, p.temperature_c);
      }
    }
    if (!isFinite(tMin)) {
      ctx.fillStyle = "#667";
      ctx.fillText("no sensor reports yet", 10, height / 2);
      return;
    }
    if (tMax - tMin < 1) {
      const mid = (tMax + tMin) / 2;
      tMin = mid - 0.5;
      tMax = mid + 0.5;
    }
    const px = (t: number) => ((t - t0) / (t1 - t0 || 1)) * (width - 40) + 35;
    const py = (T: number) => height - 16 - ((T - tMin) / (tMax - tMin)) * (height - 30);

    ctx.strokeStyle = "#334";
    ctx.fillStyle = "#99a";
    ctx.font = "10px sans-serif";
    for (const T of [tMin, (tMin + tMax) / 2, tMax]) {
      const y = py(T);
      ctx.beginPath();
      ctx.moveTo(35, y);
      ctx.lineTo(width - 5, y);
      ctx.stroke();
      ctx.fillText(T.toFixed(1), 2, y + 3);
    }

    for (const [id, series] of history) {
      ctx.strokeStyle = robotColor(id);
      ctx.beginPath();
      let started = false;
      for (const p of series) {
        if (p.t_s < t0) continue;
        const x = px(p.t_s);
        const y = py(p.temperature_c);
        if (started) ctx.lineTo(x, y);
        else ctx.moveTo(x, y);
        started = true;
      }
      ctx.stroke();
    }
  }
}
