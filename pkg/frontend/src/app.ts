/**
 * Adversary playground: try to defeat the 3/8 packing guarantee.
 *
 * Start the engine server, then open index.html:
 *
 *   python3 -m sqpack serve --port 8373
 *
 * Every board pixel derives from GET /state; POST /place responses
 * only drive the flash messages. Undo replays the accepted prefix
 * through /reset, because placed squares never move.
 */

import { renderBoard } from "./board.js";
import { SessionClient, ProtocolError } from "./protocol.js";
import type { PlaceResponse, Snapshot } from "./protocol.js";
import { suggest } from "./suggest.js";

const DEFAULT_SERVER = "http://127.0.0.1:8373";

const PRESETS: Array<{ label: string; heights: number[] }> = [
  { label: "five mediums 0.27", heights: [0.27, 0.27, 0.27, 0.27, 0.27] },
  { label: "pair grind", heights: [0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.21] },
  { label: "column churn", heights: [0.12, 0.12, 0.11, 0.07, 0.07, 0.07, 0.05, 0.05, 0.05, 0.05] },
];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

class App {
  private client: SessionClient;
  /** Heights the server accepted, in order; the undo replay source. */
  private accepted: number[] = [];
  private busy = false;

  constructor(serverUrl: string) {
    this.client = new SessionClient(serverUrl);
  }

  async start(): Promise<void> {
    el<HTMLButtonElement>("place").addEventListener("click", () => {
      void this.submitFromInput();
    });
    el<HTMLInputElement>("height").addEventListener("keydown", (ev) => {
      if (ev.key === "Enter") void this.submitFromInput();
    });
    el<HTMLButtonElement>("undo").addEventListener("click", () => {
      void this.undo();
    });
    el<HTMLButtonElement>("reset").addEventListener("click", () => {
      void this.resetBoard();
    });
    const presetBox = el<HTMLDivElement>("presets");
    for (const preset of PRESETS) {
      const button = document.createElement("button");
      button.textContent = preset.label;
      button.addEventListener("click", () => {
        void this.runPreset(preset.heights);
      });
      presetBox.appendChild(button);
    }
    await this.refresh();
  }

  private flash(text: string, kind: "ok" | "bad" | "info"): void {
    const bar = el<HTMLDivElement>("flash");
    bar.textContent = text;
    bar.dataset.kind = kind;
    bar.classList.remove("pulse");
    void bar.offsetWidth; // restart the CSS animation
    bar.classList.add("pulse");
  }

  private log(text: string): void {
    const list = el<HTMLUListElement>("log");
    const item = document.createElement("li");
    item.textContent = text;
    list.prepend(item);
    while (list.childElementCount > 40) list.lastElementChild?.remove();
  }

  /** Re-derive the whole view from the authoritative snapshot. */
  private async refresh(): Promise<void> {
    let snapshot: Snapshot;
    try {
      snapshot = (await this.client.state()).snapshot;
    } catch (err) {
      this.flash(this.describeError(err), "bad");
      return;
    }
    el<HTMLDivElement>("board-host").innerHTML = renderBoard(snapshot);

    const area = snapshot.cumulative_area;
    const ratio = Math.min(area / snapshot.budget, 1);
    el<HTMLDivElement>("meter-fill").style.width = `${(ratio * 100).toFixed(1)}%`;
    el<HTMLSpanElement>("meter-text").textContent =
      `${area.toFixed(6)} / ${snapshot.budget} (${(ratio * 100).toFixed(1)}%)`;
    el<HTMLSpanElement>("phase-text").textContent =
      `${snapshot.count} squares | medium: ${snapshot.medium.phase} | ` +
      `small: ${snapshot.small_phase}`;

    const box = el<HTMLDivElement>("suggestions");
    box.innerHTML = "";
    for (const s of suggest(snapshot)) {
      const button = document.createElement("button");
      button.textContent = `${s.label}: ${s.height}`;
      button.title = s.note;
      button.addEventListener("click", () => {
        el<HTMLInputElement>("height").value = s.height;
        el<HTMLInputElement>("height").focus();
      });
      box.appendChild(button);
    }
  }

  private describeError(err: unknown): string {
    if (err instanceof ProtocolError) return err.message;
    return `unexpected error: ${String(err)}`;
  }

  private async submitFromInput(): Promise<void> {
    const input = el<HTMLInputElement>("height");
    const raw = input.value.trim();
    if (!raw) return;
    await this.submit(raw);
    input.select();
  }

  private async submit(height: number | string): Promise<PlaceResponse | null> {
    if (this.busy) return null;
    this.busy = true;
    try {
      const outcome = await this.client.place(height);
      if (outcome.status === "placed") {
        this.flash(
          `placed ${height} as ${outcome.class} on ${outcome.shelf_id ?? "the board"}`,
          "ok",
        );
        this.log(`#${this.accepted.length} ${height} -> ${outcome.shelf_id}`);
        this.accepted.push(Number(height));
      } else {
        this.flash(`${outcome.reason}: ${outcome.detail ?? height}`, "bad");
        this.log(`${height} rejected (${outcome.reason})`);
      }
      return outcome;
    } catch (err) {
      this.flash(this.describeError(err), "bad");
      return null;
    } finally {
      this.busy = false;
      // The board always re-syncs from /state, even after errors.
      await this.refresh();
    }
  }

  private async runPreset(heights: number[]): Promise<void> {
    for (const h of heights) {
      const outcome = await this.submit(h);
      if (!outcome || outcome.status !== "placed") break;
      await new Promise((resolve) => setTimeout(resolve, 150));
    }
  }

  private async undo(): Promise<void> {
    if (this.accepted.length === 0) {
      this.flash("nothing to undo", "info");
      return;
    }
    const prefix = this.accepted.slice(0, -1);
    try {
      await this.client.replay(prefix);
      this.accepted = prefix;
      this.flash(`undid last square (replayed ${prefix.length})`, "info");
    } catch (err) {
      this.flash(this.describeError(err), "bad");
    }
    await this.refresh();
  }

  private async resetBoard(): Promise<void> {
    try {
      await this.client.reset();
      this.accepted = [];
      this.flash("board cleared", "info");
    } catch (err) {
      this.flash(this.describeError(err), "bad");
    }
    await this.refresh();
  }
}

const params = new URLSearchParams(window.location.search);
const app = new App(params.get("server") ?? DEFAULT_SERVER);
void app.start();
