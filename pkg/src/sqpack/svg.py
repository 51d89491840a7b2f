"""SVG rendering of packing snapshots.

Output is a standalone SVG document: the container frame, every shelf
outlined (buffers dashed), and each placed square filled with its size
class's color. Geometry uses y-up coordinates; SVG is y-down, so the
renderer flips vertically.
"""

from __future__ import annotations

_CLASS_FILLS = {
    "large": "#c0504d",
    "medium": "#e8a33d",
    "small": "#4f81bd",
}
_SUB_FILLS = ("#58a864", "#7fbf7b", "#a6dba0", "#c7e9c0")
_SHELF_STROKE = "#555555"
_BUFFER_STROKE = "#999999"


def _fill_for(label: str) -> str:
    if label in _CLASS_FILLS:
        return _CLASS_FILLS[label]
    if label.startswith("sub"):
        try:
            k = int(label[3:])
        except ValueError:
            k = 1
        return _SUB_FILLS[(k - 1) % len(_SUB_FILLS)]
    return "#888888"


def render_snapshot(snapshot: dict, *, size: int = 800) -> str:
    """Render a snapshot dict to an SVG document string."""
    margin = size * 0.04
    scale = size - 2 * margin

    def px(x: float) -> float:
        return margin + x * scale

    def py(y: float, h: float = 0.0) -> float:
        # flip: container y grows upward
        return margin + (1.0 - y - h) * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="#fdfdfb"/>',
        f'<rect x="{px(0):.2f}" y="{py(0, 1):.2f}" width="{scale:.2f}" '
        f'height="{scale:.2f}" fill="none" stroke="#222" stroke-width="2"/>',
    ]
    for sid, sh in snapshot.get("shelves", {}).items():
        r = sh["rect"]
        dashed = sid.startswith("b") or sh["orientation"] == "vertical"
        stroke = _BUFFER_STROKE if dashed else _SHELF_STROKE
        dash = ' stroke-dasharray="6 4"' if dashed else ""
        parts.append(
            f'<rect x="{px(r["x"]):.2f}" y="{py(r["y"], r["h"]):.2f}" '
            f'width="{r["w"] * scale:.2f}" height="{r["h"] * scale:.2f}" '
            f'fill="none" stroke="{stroke}" stroke-width="1"{dash}>'
            f"<title>{sid} used={sh['used']:.4f} {sh['state']}</title></rect>"
        )
    for p in snapshot.get("placements", []):
        side = p["height"]
        parts.append(
            f'<rect x="{px(p["x"]):.2f}" y="{py(p["y"], side):.2f}" '
            f'width="{side * scale:.2f}" height="{side * scale:.2f}" '
            f'fill="{_fill_for(p["class"])}" fill-opacity="0.85" '
            f'stroke="#1a1a1a" stroke-width="0.6">'
            f"<title>#{p['id']} h={side:.6g} {p['class']} "
            f"{p.get('shelf_id')}</title></rect>"
        )
    area = snapshot.get("cumulative_area", 0.0)
    count = snapshot.get("count", len(snapshot.get("placements", [])))
    parts.append(
        f'<text x="{margin:.2f}" y="{size - margin * 0.35:.2f}" '
        f'font-family="monospace" font-size="{size * 0.022:.1f}">'
        f"squares={count} area={area:.6f}</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts)


def write_svg(path: str, snapshot: dict, *, size: int = 800) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_snapshot(snapshot, size=size))
        fh.write("\n")
