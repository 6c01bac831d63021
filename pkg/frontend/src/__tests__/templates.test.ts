import { describe, expect, it } from "vitest";

import { errorLineSet } from "../editor";
import { TEMPLATES, templateByName } from "../templates";

describe("program templates", () => {
  it("ships the three reference programs", () => {
    expect(TEMPLATES.map((t) => t.name)).toEqual([
      "default",
      "temperature_report",
      "thermotaxis",
    ]);
  });

  it("every template is plausible assembly and fits instruction memory", () => {
    for (const t of TEMPLATES) {
      const code = t.source
        .split("\n")
        .map((line) => line.replace(/;.*/, "").trim())
        .filter((line) => line.length > 0);
      expect(code.length).toBeGreaterThan(0);
      expect(code.length).toBeLessThanOrEqual(32);
      for (const line of code) {
        expect(line).toMatch(/^(\w+:)?\s*[a-z]+(\s+\S.*)?$/);
      }
    }
  });

  it("looks up templates by name", () => {
    expect(templateByName("thermotaxis")?.source).toContain("blt");
    expect(templateByName("nope")).toBeUndefined();
  });
});

describe("editor error mapping", () => {
  it("collects the reported lines", () => {
    const lines = errorLineSet([
      { line: 2, message: "bad" },
      { line: 5, message: "worse" },
      { line: 2, message: "again" },
    ]);
    expect([...lines].sort()).toEqual([2, 5]);
  });
});
