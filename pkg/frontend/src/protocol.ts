// Wire protocol spoken with the base-station session service: JSON text
// messages over one WebSocket. Every server message carries a seq that must
// strictly increase per connection.

export interface RobotSnapshot {
  id: number;
  type_code: number;
  x_um: number;
  y_um: number;
  theta_deg: number;
  mode: string;
  enable_mask: number;
  polarity_mask: number;
  temp_code: number | null;
}

export interface FieldSummary {
  kind: "uniform" | "warming_bath" | "linear_gradient";
  t0_c: number;
  t_inf_c?: number;
  tau_s?: number;
  grad_c_per_mm?: [number, number];
  origin_um?: [number, number];
  sign?: number;
}

export interface Snapshot {
  type: "snapshot";
  seq: number;
  t_s: number;
  paused: boolean;
  multiplier: number;
  tick_s: number;
  arena: { width_um: number; height_um: number };
  field: FieldSummary;
  robots: RobotSnapshot[];
}

export interface AsmErrorEntry {
  line: number;
  message: string;
}

export type ServerMessage =
  | Snapshot
  | { type: "ack"; seq: number; cmd: string; words?: number }
  | { type: "asm_error"; seq: number; errors: AsmErrorEntry[] }
  | { type: "error"; seq: number; message: string };

export type Target = "global" | number;

// One user action maps to exactly one of these messages.
export type ClientMessage =
  | { type: "load_program"; target: Target; source: string; clock_lock: boolean }
  | { type: "set_field_sign"; sign: 1 | -1 }
  | { type: "set_intensity"; power_wm2: number; comms_wm2: number }
  | { type: "pause" }
  | { type: "resume" }
  | { type: "set_speed"; multiplier: number }
  | { type: "set_decimation"; every: number };

export function parseServerMessage(text: string): ServerMessage {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch {
    throw new Error(`server sent non-JSON: ${text.slice(0, 80)}`);
  }
  if (typeof obj !== "object" || obj === null) {
    throw new Error("server message is not an object");
  }
  const msg = obj as Record<string, unknown>;
  if (typeof msg.type !== "string" || typeof msg.seq !== "number") {
    throw new Error("server message missing type/seq");
  }
  switch (msg.type) {
    case "snapshot": {
      const snap = msg as unknown as Snapshot;
      if (!Array.isArray(snap.robots) || typeof snap.t_s !== "number") {
        throw new Error("malformed snapshot");
      }
      return snap;
    }
    case "ack":
      return msg as unknown as ServerMessage;
    case "asm_error": {
      if (!Array.isArray(msg.errors)) throw new Error("malformed asm_error");
      return msg as unknown as ServerMessage;
    }
    case "error":
      return msg as unknown as ServerMessage;
    default:
      throw new Error(`unknown server message type ${msg.type}`);
  }
}

// Guards the per-connection contract that seq strictly increases.
export class SeqTracker {
  private last = -1;

  accept(seq: number): boolean {
    if (seq <= this.last) return false;
    this.last = seq;
    return true;
  }

  reset(): void {
    this.last = -1;
  }
}

export function buildLoadProgram(
  source: string,
  target: Target,
  clockLock = false,
): Extract<ClientMessage, { type: "load_program" }> {
  return { type: "load_program", target, source, clock_lock: clockLock };
}

export function buildSetFieldSign(
  sign: 1 | -1,
): Extract<ClientMessage, { type: "set_field_sign" }> {
  return { type: "set_field_sign", sign };
}

export function decodeTemperature(code: number): number {
  return 10.0 + 0.2 * code;
}
