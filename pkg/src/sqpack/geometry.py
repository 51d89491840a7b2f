"""Axis-aligned geometric primitives.

All coordinates are fractions of the unit container edge, stored as
doubles. A single global tolerance ``EPS`` is applied to every
comparison at a geometric boundary; ``AREA_EPS`` is the looser
tolerance used for area and density comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass

#: Tolerance for coordinate comparisons at geometric boundaries.
EPS = 1e-12

#: Tolerance for area / density comparisons.
AREA_EPS = 1e-9


@dataclass(frozen=True)
class Rect:
    """An axis-aligned rectangle: origin (x, y), width w, height h."""

    x: float
    y: float
    w: float
    h: float

    @property
    def x2(self) -> float:
        return self.x + self.w

    @property
    def y2(self) -> float:
        return self.y + self.h

    @property
    def area(self) -> float:
        return self.w * self.h

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "w": self.w, "h": self.h}


#: The unit container.
CONTAINER = Rect(0.0, 0.0, 1.0, 1.0)


def rects_overlap(a: Rect, b: Rect) -> bool:
    """True iff the interiors of ``a`` and ``b`` intersect.

    Shared edges and corners do not count as overlap: packings in this
    engine are edge-to-edge, so flush neighbours must be legal. The
    intersection must be deeper than ``EPS`` on both axes, which also
    absorbs one-ulp noise from accumulated offsets.
    """
    dx = min(a.x2, b.x2) - max(a.x, b.x)
    if dx <= EPS:
        return False
    dy = min(a.y2, b.y2) - max(a.y, b.y)
    return dy > EPS


def rect_contains(outer: Rect, inner: Rect, tol: float = 0.0) -> bool:
    """True iff ``inner`` lies within ``outer`` expanded by ``tol`` per side."""
    return (
        inner.x >= outer.x - tol
        and inner.y >= outer.y - tol
        and inner.x2 <= outer.x2 + tol
        and inner.y2 <= outer.y2 + tol
    )


def intersection_area(a: Rect, b: Rect) -> float:
    """Area of the intersection of ``a`` and ``b`` (0.0 when disjoint)."""
    dx = min(a.x2, b.x2) - max(a.x, b.x)
    dy = min(a.y2, b.y2) - max(a.y, b.y)
    if dx <= 0.0 or dy <= 0.0:
        return 0.0
    return dx * dy


@dataclass(frozen=True)
class PlacedSquare:
    """A square fixed in the container.

    ``id`` is the 0-based arrival index, ``height`` the side length,
    ``label`` the size-class label and ``shelf_id`` the shelf holding
    the square. Squares placed directly into the container use the
    pseudo ids "bottom" and "top" (mediums) and "corner" (the large
    square).
    """

    id: int
    height: float
    x: float
    y: float
    label: str
    shelf_id: str | None = None

    @property
    def rect(self) -> Rect:
        return Rect(self.x, self.y, self.height, self.height)

    @property
    def area(self) -> float:
        return self.height * self.height

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "height": self.height,
            "class": self.label,
            "x": self.x,
            "y": self.y,
            "shelf_id": self.shelf_id,
        }
