/**
 * Board renderer: server snapshot in, standalone SVG markup out.
 *
 * The view derives solely from GET /state -- shelf outlines, placed
 * squares, used-length markers and the reserved-corner indicator are
 * all read (or trivially derived: 1 - sqrt(budget - area)) from
 * snapshot fields. No packing decisions happen here, which keeps the
 * renderer a pure string function that tests can run without a DOM.
 *
 * Server coordinates have y pointing up; SVG y points down, so every
 * rect is flipped through `size - (y + h) * size`.
 */

import type { RectDict, Snapshot } from "./protocol.js";

const CLASS_FILLS: Record<string, string> = {
  large: "#b5651d",
  medium: "#d9a441",
  small: "#4a90d9",
};

/** Stable color per subclass depth; darker as squares shrink. */
function fillFor(label: string): string {
  const direct = CLASS_FILLS[label];
  if (direct) return direct;
  const k = Number(label.replace("sub", "")) || 1;
  const tones = ["#3bb273", "#2f9e8f", "#2a7f9e", "#4a6fa5", "#6c5b9e"];
  return tones[Math.min(k - 1, tones.length - 1)] ?? "#3bb273";
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface BoardOptions {
  size?: number;
}

function svgRect(
  r: RectDict,
  size: number,
  attrs: string,
  title?: string,
): string {
  const x = (r.x * size).toFixed(2);
  const y = (size - (r.y + r.h) * size).toFixed(2);
  const w = (r.w * size).toFixed(2);
  const h = (r.h * size).toFixed(2);
  const body = title ? `<title>${esc(title)}</title>` : "";
  return `<rect x="${x}" y="${y}" width="${w}" height="${h}" ${attrs}>${body}</rect>`;
}

export function renderBoard(snapshot: Snapshot, options: BoardOptions = {}): string {
  const size = options.size ?? 640;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${size} ${size}" ` +
      `width="${size}" height="${size}" class="board">`,
  );
  parts.push(
    `<rect x="0" y="0" width="${size}" height="${size}" fill="#fdfdf8" stroke="#222" stroke-width="2"/>`,
  );

  // Shelf outlines: primary strips solid, buffers and columns dashed;
  // closed shelves fade out.
  for (const shelf of Object.values(snapshot.shelves)) {
    const dashed = shelf.id.startsWith("b") || shelf.orientation === "vertical";
    const closed = shelf.state !== "open";
    const attrs =
      `fill="none" stroke="${closed ? "#c8c8c0" : "#8a8a80"}" stroke-width="1" ` +
      (dashed ? `stroke-dasharray="5 4" ` : "") +
      `data-shelf="${esc(shelf.id)}" data-state="${esc(shelf.state)}"`;
    parts.push(
      svgRect(shelf.rect, size, attrs, `${shelf.id} (${shelf.state}, used ${shelf.used.toFixed(4)})`),
    );

    // Used-length marker: a tick across the shelf at its fill frontier.
    if (shelf.state === "open" && shelf.used > 0) {
      if (shelf.orientation === "horizontal") {
        const x = ((shelf.rect.x + shelf.used) * size).toFixed(2);
        const y1 = (size - (shelf.rect.y + shelf.rect.h) * size).toFixed(2);
        const y2 = (size - shelf.rect.y * size).toFixed(2);
        parts.push(
          `<line x1="${x}" y1="${y1}" x2="${x}" y2="${y2}" stroke="#e05252" ` +
            `stroke-width="1.5" class="used-marker" data-shelf="${esc(shelf.id)}"/>`,
        );
      } else {
        const y = (size - (shelf.rect.y + shelf.used) * size).toFixed(2);
        const x1 = (shelf.rect.x * size).toFixed(2);
        const x2 = ((shelf.rect.x + shelf.rect.w) * size).toFixed(2);
        parts.push(
          `<line x1="${x1}" y1="${y}" x2="${x2}" y2="${y}" stroke="#e05252" ` +
            `stroke-width="1.5" class="used-marker" data-shelf="${esc(shelf.id)}"/>`,
        );
      }
    }
  }

  // Placed squares, colored by class.
  for (const p of snapshot.placements) {
    const rect: RectDict = { x: p.x, y: p.y, w: p.height, h: p.height };
    const attrs =
      `fill="${fillFor(p.class)}" fill-opacity="0.82" stroke="#333" ` +
      `stroke-width="0.8" data-square="${p.id}" data-class="${esc(p.class)}"`;
    parts.push(
      svgRect(rect, size, attrs, `#${p.id} h=${p.height} ${p.class} -> ${p.shelf_id ?? "-"}`),
    );
  }

  // Reserved corner for a potential large square, while one is still
  // possible: side sqrt(budget - area) anchored at the top-right.
  if (snapshot.cumulative_area <= 0.125 && snapshot.large === null) {
    const side = Math.sqrt(snapshot.budget - snapshot.cumulative_area);
    const reserved: RectDict = { x: 1 - side, y: 1 - side, w: side, h: side };
    parts.push(
      svgRect(
        reserved,
        size,
        `fill="none" stroke="#b5651d" stroke-width="1.5" stroke-dasharray="8 5" class="reserved-corner"`,
        `reserved for a large square up to ${side.toFixed(4)}`,
      ),
    );
  }

  parts.push("</svg>");
  return parts.join("\n");
}
