import { describe, expect, it } from "vitest";

import type { Snapshot } from "../protocol";
import {
  applySnapshot,
  gradientAvailable,
  initialView,
  targetedRobotIds,
  typeCodes,
} from "../state";

function snapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  return {
    type: "snapshot",
    seq: 0,
    t_s: 0,
    paused: false,
    multiplier: 1,
    tick_s: 0.25,
    arena: { width_um: 1000, height_um: 1000 },
    field: { kind: "uniform", t0_c: 25 },
    robots: [
      {
        id: 1,
        type_code: 1,
        x_um: 0,
        y_um: 0,
        theta_deg: 0,
        mode: "running",
        enable_mask: 15,
        polarity_mask: 0,
        temp_code: null,
      },
      {
        id: 2,
        type_code: 2,
        x_um: 10,
        y_um: 0,
        theta_deg: 90,
        mode: "mot",
        enable_mask: 15,
        polarity_mask: 6,
        temp_code: 75,
      },
    ],
    ...overrides,
  };
}

describe("applySnapshot", () => {
  it("replaces the view with server truth (re-hydration identity)", () => {
    const a = initialView();
    const b = initialView();
    const snap = snapshot({ t_s: 5 });
    applySnapshot(a, snap);
    applySnapshot(a, snap); // reapplying is idempotent
    applySnapshot(b, snap); // fresh view hydrates identically
    expect(a.snapshot).toEqual(b.snapshot);
    expect([...a.tempHistory.entries()]).toEqual([...b.tempHistory.entries()]);
  });

  it("accumulates decoded temperatures only for reporting robots", () => {
    const view = initialView();
    applySnapshot(view, snapshot({ t_s: 1 }));
    expect(view.tempHistory.has(1)).toBe(false);
    const series = view.tempHistory.get(2)!;
    expect(series).toHaveLength(1);
    expect(series[0].temperature_c).toBeCloseTo(25.0);
  });
});

describe("target selection", () => {
  it("maps global and type targets to robot ids", () => {
    const view = initialView();
    applySnapshot(view, snapshot());
    expect([...targetedRobotIds(view)]).toEqual([1, 2]);
    view.target = 2;
    expect([...targetedRobotIds(view)]).toEqual([2]);
    view.target = 3;
    expect([...targetedRobotIds(view)]).toEqual([]);
  });

  it("lists the type codes present", () => {
    const view = initialView();
    applySnapshot(view, snapshot());
    expect(typeCodes(view)).toEqual([1, 2]);
  });
});

describe("gradientAvailable", () => {
  it("is false without a gradient field and true with one", () => {
    const view = initialView();
    applySnapshot(view, snapshot());
    expect(gradientAvailable(view)).toBe(false);
    applySnapshot(
      view,
      snapshot({
        field: {
          kind: "linear_gradient",
          t0_c: 30,
          grad_c_per_mm: [0.1, 0],
          origin_um: [0, 0],
          sign: 1,
        },
      }),
    );
    expect(gradientAvailable(view)).toBe(true);
  });
});
