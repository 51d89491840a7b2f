/**
 * Protocol fidelity against the real engine server.
 *
 * Spawns `python3 -m sqpack serve --port 0`, drives it through
 * SessionClient exactly as the page does, and cross-checks a 50-step
 * session against the same heights run directly through the CLI
 * (`sqpack pack --log`): every placement must be bit-identical, and
 * the budget meter's number must equal the server's cumulative_area
 * after every single step.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ProtocolError, SessionClient } from "../src/protocol.js";
import type { PlaceResponse } from "../src/protocol.js";

const REPO_ROOT = join(fileURLToPath(new URL(".", import.meta.url)), "..", "..");

/**
 * 50 heights, total area 0.349 (inside the 3/8 budget), chosen so the
 * session walks through mediums, the starter strip, the bottom pair
 * and four column classes including successor columns.
 */
const SCRIPT: number[] = [
  0.27, 0.2, 0.12, 0.07, 0.27, 0.05, 0.03, 0.2, 0.12, 0.07,
  0.05, 0.02, 0.03, 0.12, 0.07, 0.02, 0.05, 0.03, 0.12, 0.07,
  0.02, 0.05, 0.03, 0.07, 0.02, 0.05, 0.03, 0.07, 0.02, 0.05,
  0.03, 0.02, 0.05, 0.03, 0.02, 0.05, 0.03, 0.02, 0.03, 0.02,
  0.02, 0.03, 0.02, 0.02, 0.02, 0.02, 0.02, 0.02, 0.02, 0.02,
];

let server: ChildProcess;
let baseUrl: string;

function startServer(): Promise<string> {
  return new Promise((resolve, reject) => {
    const proc = spawn(
      "python3",
      ["-m", "sqpack", "serve", "--host", "127.0.0.1", "--port", "0"],
      { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] },
    );
    server = proc;
    let out = "";
    let err = "";
    const timer = setTimeout(() => {
      reject(new Error(`server start timeout\nstdout: ${out}\nstderr: ${err}`));
    }, 30_000);
    proc.stdout?.on("data", (chunk: Buffer) => {
      out += chunk.toString();
      const match = out.match(/listening on (http:\/\/[^\s]+)/);
      if (match && match[1]) {
        clearTimeout(timer);
        resolve(match[1]);
      }
    });
    proc.stderr?.on("data", (chunk: Buffer) => {
      err += chunk.toString();
    });
    proc.on("error", (e) => {
      clearTimeout(timer);
      reject(e);
    });
    proc.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`server exited with ${code}\nstderr: ${err}`));
    });
  });
}

beforeAll(async () => {
  baseUrl = await startServer();
});

afterAll(() => {
  server?.kill();
});

interface LogRecord {
  id: number;
  height: number;
  class: string;
  x: number;
  y: number;
  shelf_id: string | null;
}

/** Run the same heights straight through the CLI and read its log. */
function directPlacements(heights: number[]): LogRecord[] {
  const dir = mkdtempSync(join(tmpdir(), "sqpack-fidelity-"));
  try {
    const seqPath = join(dir, "heights.json");
    const logPath = join(dir, "log.jsonl");
    // JSON keeps every double exact, so both runs parse identical bits.
    writeFileSync(seqPath, JSON.stringify(heights));
    const run = spawnSync(
      "python3",
      ["-m", "sqpack", "pack", seqPath, "--log", logPath],
      { cwd: REPO_ROOT, encoding: "utf-8" },
    );
    expect(run.status, run.stderr).toBe(0);
    return readFileSync(logPath, "utf-8")
      .trim()
      .split("\n")
      .map((line) => JSON.parse(line) as LogRecord);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

describe("session protocol against a live engine", () => {
  it("replays 50 steps with placements identical to direct library runs", async () => {
    const client = new SessionClient(baseUrl);
    await client.reset();

    const outcomes: Array<PlaceResponse & { status: "placed" }> = [];
    for (let i = 0; i < SCRIPT.length; i++) {
      const outcome = await client.place(SCRIPT[i]!);
      expect(outcome.status, `step ${i} (${SCRIPT[i]})`).toBe("placed");
      if (outcome.status !== "placed") throw new Error("unreachable");
      outcomes.push(outcome);

      // The page's budget meter renders state.cumulative_area; it must
      // agree with the area reported by the placement that just landed.
      const state = await client.state();
      expect(state.snapshot.cumulative_area).toBe(outcome.cumulative_area);
      expect(state.cumulative_area).toBe(outcome.cumulative_area);
      expect(state.snapshot.count).toBe(i + 1);
      expect(state.budget_remaining).toBe(outcome.budget_remaining);
    }

    const direct = directPlacements(SCRIPT);
    expect(direct.length).toBe(SCRIPT.length);
    for (let i = 0; i < SCRIPT.length; i++) {
      const viaHttp = outcomes[i]!;
      const viaCli = direct[i]!;
      expect(viaCli.id).toBe(i);
      // Bit-exact: doubles survive the JSON round trip unchanged.
      expect(viaHttp.rect.x, `x of square ${i}`).toBe(viaCli.x);
      expect(viaHttp.rect.y, `y of square ${i}`).toBe(viaCli.y);
      expect(viaHttp.rect.w, `w of square ${i}`).toBe(viaCli.height);
      expect(viaHttp.rect.h, `h of square ${i}`).toBe(viaCli.height);
      expect(viaHttp.class, `class of square ${i}`).toBe(viaCli.class);
      expect(viaHttp.shelf_id, `shelf of square ${i}`).toBe(viaCli.shelf_id);
    }

    // The walk was chosen to exercise the whole board, not one corner.
    const shelves = new Set(direct.map((r) => r.shelf_id));
    expect(shelves.size).toBeGreaterThanOrEqual(10);
  });

  it("undoes by reset + replay, reproducing the prefix exactly", async () => {
    const client = new SessionClient(baseUrl);
    await client.reset();

    const heights = [0.27, 0.2, 0.12, 0.07, 0.05];
    const first: PlaceResponse[] = [];
    for (const h of heights) first.push(await client.place(h));
    expect(first.every((o) => o.status === "placed")).toBe(true);

    // Undo the last square: replay everything but the final height.
    const prefix = heights.slice(0, -1);
    const replayed = await client.replay(prefix);
    expect(replayed.length).toBe(prefix.length);
    for (let i = 0; i < prefix.length; i++) {
      const a = first[i]!;
      const b = replayed[i]!;
      expect(b.status).toBe("placed");
      if (a.status !== "placed" || b.status !== "placed") throw new Error("unreachable");
      expect(b.rect).toEqual(a.rect);
      expect(b.shelf_id).toBe(a.shelf_id);
    }
    const state = await client.state();
    expect(state.snapshot.count).toBe(prefix.length);
  });

  it("serializes concurrent submissions into consecutive seq numbers", async () => {
    const client = new SessionClient(baseUrl);
    await client.reset();

    // Fire everything at once; the client must strictly order them.
    const outcomes = await Promise.all(
      [0.02, 0.02, 0.02, 0.02, 0.02, 0.02, 0.02, 0.02].map((h) => client.place(h)),
    );
    for (let i = 1; i < outcomes.length; i++) {
      expect(outcomes[i]!.seq).toBe(outcomes[i - 1]!.seq + 1);
    }
  });

  it("keeps the board unchanged when the server rejects", async () => {
    const client = new SessionClient(baseUrl);
    await client.reset();

    const ok = await client.place(0.51);
    expect(ok.status).toBe("placed");

    const second = await client.place(0.52);
    expect(second.status).toBe("rejected");
    if (second.status !== "rejected") throw new Error("unreachable");
    expect(second.reason).toBe("no_fit");

    const bad = await client.place("abc");
    expect(bad.status).toBe("rejected");
    if (bad.status !== "rejected") throw new Error("unreachable");
    expect(bad.reason).toBe("invalid_height");

    const state = await client.state();
    expect(state.snapshot.count).toBe(1);
    expect(state.snapshot.cumulative_area).toBe(0.51 * 0.51);
  });
});

describe("client error handling (no server involved)", () => {
  it("wraps network failures in ProtocolError", async () => {
    const client = new SessionClient("http://127.0.0.1:1", async () => {
      throw new Error("connection refused");
    });
    await expect(client.state()).rejects.toBeInstanceOf(ProtocolError);
  });

  it("reports non-OK statuses with the status code", async () => {
    const client = new SessionClient("http://example.invalid", async () => ({
      ok: false,
      status: 503,
      json: async () => ({}),
    }));
    const err = await client.state().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ProtocolError);
    expect((err as ProtocolError).status).toBe(503);
  });

  it("keeps the queue alive after a failed request", async () => {
    let calls = 0;
    const client = new SessionClient("http://stub", async () => {
      calls += 1;
      if (calls === 1) throw new Error("boom");
      return {
        ok: true,
        status: 200,
        json: async () => ({ seq: calls, status: "ok", cumulative_area: 0, budget_remaining: 0.375 }),
      };
    });
    await expect(client.reset()).rejects.toBeInstanceOf(ProtocolError);
    const second = await client.reset();
    expect(second.seq).toBe(2);
  });
});
