/**
 * Adversarial height suggestions derived from the live snapshot.
 *
 * The helper surfaces class-interval edges near typical attacks: the
 * just-above-medium floor, the largest in-budget large square while
 * the corner is still winnable, a small that closes the bottom pair,
 * and the exact tops of the column subclasses with open columns.
 *
 * Everything here is arithmetic on public class constants plus fields
 * read from the server snapshot; no placement is ever computed
 * client-side.
 */

import type { Snapshot } from "./protocol.js";

export interface Suggestion {
  /** Height to type, already formatted for the input box. */
  height: string;
  label: string;
  note: string;
}

/** Nudge used to land strictly inside a half-open class interval. */
const EDGE_DELTA = 0.0001;

/** Ratio schedule of the subclass ladder (same constants the engine uses). */
function ratio(k: number): number {
  if (k === 0) return 0.5;
  if (k === 1) return 0.71;
  if (k === 2) return 0.65;
  return 0.58;
}

/** Max admissible height of subclass k: h_0 = 1/4, h_k = h_{k-1} * r_{k-1}. */
export function subclassTop(k: number): number {
  let h = 0.25;
  for (let i = 0; i < k; i++) {
    h *= ratio(i);
  }
  return h;
}

function fmt(h: number): string {
  // Up to 12 fractional digits; the server's height literal limit.
  return h.toFixed(12).replace(/0+$/, "").replace(/\.$/, "");
}

/**
 * Format a class's top height without ever crossing the boundary.
 *
 * The deep class tops are not 12-digit decimals (class 3's sits one
 * ulp below 0.0576875), so nearest-rounding can produce a string that
 * parses just ABOVE the top and lands in the class before it. When
 * that happens, truncate the exact expansion instead: a hair low
 * stays inside the half-open interval, a hair high does not.
 */
function fmtClassTop(h: number): string {
  const nearest = fmt(h);
  if (Number(nearest) <= h) return nearest;
  const fixed = h.toFixed(20);
  const cut = fixed.slice(0, fixed.indexOf(".") + 13);
  return cut.replace(/0+$/, "").replace(/\.$/, "");
}

export function suggest(snapshot: Snapshot): Suggestion[] {
  const out: Suggestion[] = [];
  const area = snapshot.cumulative_area;
  const budget = snapshot.budget;

  // Just-above-the-medium-floor probe: the classic frontier attack.
  out.push({
    height: "0.2501",
    label: "barely medium",
    note: "just above 1/4: forces a floor-row slot wider than any small",
  });

  // Largest in-budget large square, only while the corner fight is on:
  // past 1/8 of placed area a large can no longer be in budget, and a
  // second large can never fit at all.
  if (area <= 0.125 && snapshot.large === null) {
    const side = Math.sqrt(budget - area) - EDGE_DELTA;
    if (side > 0.5) {
      out.push({
        height: fmt(side),
        label: "max large",
        note: "largest corner square the area budget still allows",
      });
    }
  }

  // A small that closes the bottom pair: must overshoot the free run of
  // both pair shelves yet stay within the small class.
  if (snapshot.small_phase === "pair12") {
    const limit = snapshot.medium.bottom_left;
    const free: number[] = [];
    for (const id of ["p1", "p2"]) {
      const sh = snapshot.shelves[id];
      if (sh) free.push(Math.min(sh.length, limit) - sh.used);
    }
    const needed = Math.max(...free) + EDGE_DELTA;
    if (free.length === 2 && needed <= 0.25 && needed > 0.125) {
      out.push({
        height: fmt(needed),
        label: "pair closer",
        note: "fits neither bottom shelf: forces both to close at once",
      });
    }
  }

  // Starter-strip closer while the buffer strip is still the target.
  if (snapshot.small_phase === "buffer_b0") {
    const b0 = snapshot.shelves["b0"];
    if (b0 && b0.state === "open") {
      const needed = b0.length - b0.used + EDGE_DELTA;
      if (needed <= 0.25 && needed > 0.125) {
        out.push({
          height: fmt(needed),
          label: "strip closer",
          note: "overshoots the starter strip and opens the bottom pair",
        });
      }
    }
  }

  // Top-of-class probes for every open column: maximal sides fill (and
  // churn) columns fastest.
  for (const kStr of Object.keys(snapshot.open_columns).sort()) {
    const k = Number(kStr);
    out.push({
      height: fmtClassTop(subclassTop(k)),
      label: `class-${k} top`,
      note: `heaviest square the open class-${k} column accepts`,
    });
  }

  return out;
}
