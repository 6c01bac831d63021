// Session view state. The view renders only what the server sent: applying
// the latest snapshot fully determines it, so a page reload re-hydrates to
// an identical view from the next snapshot.

import type { AsmErrorEntry, Snapshot, Target } from "./protocol";
import { decodeTemperature } from "./protocol";

export type ConnectionState = "connecting" | "connected" | "lost";

export interface TempPoint {
  t_s: number;
  temperature_c: number;
}

export interface SessionView {
  connection: ConnectionState;
  snapshot: Snapshot | null;
  target: Target;
  asmErrors: AsmErrorEntry[];
  statusLine: string;
  // Decoded-temperature history per robot id (display accumulation only).
  tempHistory: Map<number, TempPoint[]>;
}

export function initialView(): SessionView {
  return {
    connection: "connecting",
    snapshot: null,
    target: "global",
    asmErrors: [],
    statusLine: "",
    tempHistory: new Map(),
  };
}

const TEMP_HISTORY_LIMIT = 2000;

export function applySnapshot(view: SessionView, snap: Snapshot): SessionView {
  view.snapshot = snap;
  for (const robot of snap.robots) {
    if (robot.temp_code === null) continue;
    let series = view.tempHistory.get(robot.id);
    if (!series) {
      series = [];
      view.tempHistory.set(robot.id, series);
    }
    const point = { t_s: snap.t_s, temperature_c: decodeTemperature(robot.temp_code) };
    const last = series[series.length - 1];
    if (!last || last.temperature_c !== point.temperature_c || last.t_s !== point.t_s) {
      series.push(point);
      if (series.length > TEMP_HISTORY_LIMIT) series.shift();
    }
  }
  return view;
}

export function gradientAvailable(view: SessionView): boolean {
  return view.snapshot?.field.kind === "linear_gradient";
}

// Robots addressed by the current target selection (for badge highlighting).
export function targetedRobotIds(view: SessionView): Set<number> {
  const ids = new Set<number>();
  if (!view.snapshot) return ids;
  for (const robot of view.snapshot.robots) {
    if (view.target === "global" || robot.type_code === view.target) {
      ids.add(robot.id);
    }
  }
  return ids;
}

export function typeCodes(view: SessionView): number[] {
  const codes = new Set<number>();
  for (const robot of view.snapshot?.robots ?? []) codes.add(robot.type_code);
  return [...codes].sort((a, b) => a - b);
}
