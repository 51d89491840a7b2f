"""Offline shelf-packing baseline used as a feasibility oracle.

The procedure knows the whole input up front: sort the squares in
decreasing order, then fill rows left to right starting at the floor.
Each row is as tall as its first (largest) square; a square that would
cross the right wall starts the next row directly above. Packing
succeeds when the rows stack within the container; any square set with
total area at most 1/2 does.
"""

from __future__ import annotations

from .geometry import EPS, PlacedSquare
from .sizeclasses import classify


def moon_moser_pack(heights: list[float]) -> list[PlacedSquare] | None:
    """Pack offline; returns placements or None when infeasible.

    Placement ids keep the original positions in ``heights``; ties in
    height preserve the original order.
    """
    for h in heights:
        if not 0.0 < h <= 1.0:
            raise ValueError(f"height {h} outside (0, 1]")
    order = sorted(range(len(heights)), key=lambda i: (-heights[i], i))
    placements: list[PlacedSquare] = []
    row = 0
    row_y = 0.0
    row_h = 0.0
    x = 0.0
    for i in order:
        h = heights[i]
        if row_h == 0.0:
            row_h = h
        elif x + h > 1.0 + EPS:
            row += 1
            row_y += row_h
            row_h = h
            x = 0.0
        if row_y + h > 1.0 + EPS:
            return None
        placements.append(
            PlacedSquare(i, h, x, row_y, classify(h).label, f"row{row}")
        )
        x += h
    return placements


def placements_snapshot(placements: list[PlacedSquare]) -> dict:
    """Minimal snapshot dict so the audits accept oracle output."""
    return {
        "placements": [p.to_dict() for p in placements],
        "shelves": {},
        "cumulative_area": sum(p.area for p in placements),
    }
