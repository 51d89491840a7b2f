/**
 * Suggestion helper tests over engine-generated snapshot fixtures
 * (see fixtures/README note in each file's provenance: they are saved
 * GET /state bodies from real sessions).
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { subclassTop, suggest } from "../src/suggest.js";
import type { Snapshot } from "../src/protocol.js";

const FIXTURES = join(fileURLToPath(new URL(".", import.meta.url)), "fixtures");

function load(name: string): Snapshot {
  return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), "utf-8")) as Snapshot;
}

function byLabel(snapshot: Snapshot): Map<string, string> {
  return new Map(suggest(snapshot).map((s) => [s.label, s.height]));
}

describe("subclass ladder constants", () => {
  it("reproduces the engine's class tops bit for bit", () => {
    expect(subclassTop(0)).toBe(0.25);
    expect(subclassTop(1)).toBe(0.125);
    expect(subclassTop(2)).toBe(0.08875);
    expect(subclassTop(3)).toBe(0.057687499999999996);
    expect(subclassTop(4)).toBe(subclassTop(3) * 0.58);
  });

  it("sits one ulp below the naive class-3 literal", () => {
    // 0.08875 * 0.65 rounds down, so the literal 0.0576875 itself
    // belongs to class 2, not class 3 -- the suggestion must too.
    expect(subclassTop(3)).toBeLessThan(0.0576875);
  });
});

describe("fresh board", () => {
  const snapshot = load("fresh");

  it("always offers the barely-medium probe", () => {
    expect(byLabel(snapshot).get("barely medium")).toBe("0.2501");
  });

  it("offers the largest in-budget corner square", () => {
    const height = byLabel(snapshot).get("max large");
    expect(height).toBeDefined();
    const side = Number(height);
    expect(side).toBeGreaterThan(0.5);
    // Just under sqrt(3/8): still inside budget, still a large.
    expect(side).toBeLessThan(Math.sqrt(0.375));
    expect(Math.sqrt(0.375) - side).toBeLessThan(0.001);
    expect(height).toMatch(/^0\.\d{1,12}$/);
  });

  it("offers nothing else on an empty board", () => {
    const labels = suggest(snapshot).map((s) => s.label);
    expect(labels).toEqual(["barely medium", "max large"]);
  });
});

describe("large suggestion gating", () => {
  it("disappears once placed area passes 1/8", () => {
    const labels = suggest(load("past_eighth")).map((s) => s.label);
    expect(labels).not.toContain("max large");
  });

  it("disappears once a large square is on the board", () => {
    const labels = suggest(load("with_large")).map((s) => s.label);
    expect(labels).not.toContain("max large");
  });

  it("needs both: no large yet and area within 1/8", () => {
    const fresh = load("fresh");
    const occupied: Snapshot = {
      ...fresh,
      large: { id: 0, height: 0.51, class: "large", x: 0.49, y: 0.49, shelf_id: "corner" },
    };
    expect(suggest(occupied).map((s) => s.label)).not.toContain("max large");
  });
});

describe("pair-closing suggestion", () => {
  it("computes the closer from the pair shelves' used lengths", () => {
    const snapshot = load("pair_nearly_full");
    const height = byLabel(snapshot).get("pair closer");
    // Both shelves have 0.2 of free run left; 0.2001 overshoots each
    // while staying within the small class.
    expect(height).toBe("0.2001");
    const side = Number(height);
    expect(side).toBeGreaterThan(0.125);
    expect(side).toBeLessThanOrEqual(0.25);
  });

  it("respects a medium floor squeezing the pair run", () => {
    const snapshot = load("pair_nearly_full");
    const squeezed: Snapshot = {
      ...snapshot,
      medium: { ...snapshot.medium, bottom_left: 0.95 },
    };
    // Free run becomes min(1.0, 0.95) - 0.8 = 0.15 on both shelves.
    expect(byLabel(squeezed).get("pair closer")).toBe("0.1501");
  });

  it("is absent before the pair phase and after it", () => {
    expect(suggest(load("fresh")).map((s) => s.label)).not.toContain("pair closer");
    expect(suggest(load("pair34")).map((s) => s.label)).not.toContain("pair closer");
  });

  it("is absent when only a sub-small could overshoot", () => {
    const snapshot = load("pair_nearly_full");
    const nearlyDone: Snapshot = JSON.parse(JSON.stringify(snapshot)) as Snapshot;
    const p1 = nearlyDone.shelves["p1"]!;
    const p2 = nearlyDone.shelves["p2"]!;
    p1.used = 0.9;
    p2.used = 0.9;
    // 0.1001 would overshoot but is not a small; no suggestion fits.
    expect(byLabel(nearlyDone).has("pair closer")).toBe(false);
  });
});

describe("starter-strip suggestion", () => {
  it("suggests the smallest small that overshoots the strip", () => {
    const fresh = load("fresh");
    const partly: Snapshot = JSON.parse(JSON.stringify(fresh)) as Snapshot;
    partly.shelves["b0"]!.used = 0.1;
    expect(byLabel(partly).get("strip closer")).toBe("0.1501");
  });

  it("is absent on a fresh strip, where only 0.2501 would overshoot", () => {
    expect(byLabel(load("fresh")).has("strip closer")).toBe(false);
  });

  it("is absent when the remaining gap is below the small class", () => {
    // b0 has 0.05 of its 0.25 left: an overshooting square would be a
    // sub-small and route to columns instead.
    expect(byLabel(load("past_eighth")).has("strip closer")).toBe(false);
  });
});

describe("open-column probes", () => {
  it("lists each open column's class top, smallest class last", () => {
    const suggestions = suggest(load("columns"));
    const tops = suggestions.filter((s) => s.label.startsWith("class-"));
    expect(tops.map((s) => s.label)).toEqual([
      "class-1 top",
      "class-2 top",
      "class-3 top",
      "class-4 top",
    ]);
    expect(tops.map((s) => s.height)).toEqual([
      "0.125",
      "0.08875",
      "0.057687499999",
      "0.033458749999",
    ]);
  });

  it("parses each probe back into its own class interval", () => {
    const tops = suggest(load("columns")).filter((s) => s.label.startsWith("class-"));
    tops.forEach((s, index) => {
      const k = index + 1;
      const parsed = Number(s.height);
      // Half-open interval (top_{k+1}, top_k]: the probe must not
      // round across either edge once typed and re-parsed.
      expect(parsed, s.label).toBeLessThanOrEqual(subclassTop(k));
      expect(parsed, s.label).toBeGreaterThan(subclassTop(k + 1));
    });
  });

  it("emits no probes without open columns", () => {
    const labels = suggest(load("fresh")).map((s) => s.label);
    expect(labels.some((l) => l.startsWith("class-"))).toBe(false);
  });

  it("keeps every suggested height within the input format", () => {
    for (const name of ["fresh", "pair_nearly_full", "past_eighth", "with_large", "pair34", "columns"]) {
      for (const s of suggest(load(name))) {
        expect(s.height, `${name}: ${s.label}`).toMatch(/^0\.\d{1,12}$/);
      }
    }
  });
});
