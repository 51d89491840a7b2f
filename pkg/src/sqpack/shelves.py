"""Shelves: the strips and columns that squares are packed into.

A shelf is a subrectangle with a cross dimension ``height`` (the side
squares must roughly match), a packing direction extent ``length``, and
a packing ratio ``ratio``: admissible squares have side in
(height * ratio, height]. Items are placed flush, side by side, from
the shelf's packing origin; horizontal shelves fill left to right with
items bottom-flush, vertical shelves (columns) fill bottom to top with
items left-flush.

Horizontal shelves hold two kinds of item: squares of the small class,
and whole vertical columns, which consume length equal to their width
exactly as a square would.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .geometry import EPS, Rect


class PackingError(Exception):
    """Base class for shelf and placement errors."""


class NoFitError(PackingError):
    pass


class ClassMismatchError(PackingError):
    pass


class ShelfStateError(PackingError):
    pass


class Orientation(enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


class ShelfState(enum.Enum):
    OPEN = "open"
    CLOSED = "closed"
    # Partial closure of the composite medium regions; kept in the enum so
    # snapshots can express it, the shelf objects themselves never use it.
    CLOSED_TO_MEDIUM = "closed_to_medium"


@dataclass(frozen=True)
class ShelfItem:
    """One entry in a shelf: a packed square or an embedded column.

    ``offset`` is the distance from the shelf's packing origin at which
    the item starts; ``extent`` is the length it consumes (the square's
    side, or the column's width).
    """

    kind: str  # "square" | "column"
    ref: int | str  # square id, or column shelf id
    extent: float
    offset: float


@dataclass(frozen=True)
class CloseInfo:
    """Why a shelf closed: the item that did not fit.

    ``free_limit`` is the usable length of the shelf at the moment of
    closure (it can be shorter than the nominal length when another
    class obstructs the far end).
    """

    closer_kind: str  # "square" | "column"
    closer_extent: float
    free_limit: float


@dataclass
class Shelf:
    id: str
    rect: Rect
    orientation: Orientation
    height: float
    length: float
    ratio: float
    subclass: int  # 0 for horizontal small shelves, k for class-k columns
    used: float = 0.0
    state: ShelfState = ShelfState.OPEN
    items: list[ShelfItem] = field(default_factory=list)
    close_info: CloseInfo | None = None

    @property
    def is_open(self) -> bool:
        return self.state == ShelfState.OPEN

    @property
    def min_height(self) -> float:
        return self.height * self.ratio

    def fits(self, extent: float, free_limit: float | None = None) -> bool:
        """Whether an item of the given extent fits before ``free_limit``.

        ``free_limit`` defaults to the shelf's own length; the packer
        passes a smaller value when the far end is obstructed.
        """
        if not self.is_open:
            return False
        limit = self.length if free_limit is None else free_limit
        return self.used + extent <= limit + EPS

    def item_rect(self, extent: float, offset: float | None = None) -> Rect:
        """Absolute rect an item of ``extent`` would occupy.

        Squares sit flush against the shelf floor (horizontal) or wall
        (vertical); columns span the full cross dimension.
        """
        off = self.used if offset is None else offset
        if self.orientation == Orientation.HORIZONTAL:
            return Rect(self.rect.x + off, self.rect.y, extent, extent)
        return Rect(self.rect.x, self.rect.y + off, extent, extent)

    def column_rect(self, width: float, offset: float | None = None) -> Rect:
        off = self.used if offset is None else offset
        if self.orientation != Orientation.HORIZONTAL:
            raise ShelfStateError("columns can only be embedded in horizontal shelves")
        return Rect(self.rect.x + off, self.rect.y, width, self.rect.h)

    def insert(self, kind: str, ref: int | str, extent: float,
               free_limit: float | None = None) -> Rect:
        """Append an item and return its absolute rect.

        Squares must have side within (height * ratio, height]; columns
        are exempt from the ratio rule (their width is a class constant
        below the shelf's minimum square side).
        """
        if not self.is_open:
            raise ShelfStateError(f"shelf {self.id} is {self.state.value}")
        if not self.fits(extent, free_limit):
            raise NoFitError(f"extent {extent} does not fit shelf {self.id}")
        if kind == "square" and not (self.min_height < extent <= self.height + EPS):
            raise ClassMismatchError(
                f"square side {extent} outside ({self.min_height}, {self.height}] "
                f"for shelf {self.id}"
            )
        if kind == "square":
            rect = self.item_rect(extent)
        else:
            rect = self.column_rect(extent)
        self.items.append(ShelfItem(kind, ref, extent, self.used))
        self.used += extent
        return rect

    def close(self, closer_kind: str | None = None, closer_extent: float = 0.0,
              free_limit: float | None = None) -> None:
        if not self.is_open:
            raise ShelfStateError(f"shelf {self.id} already {self.state.value}")
        self.state = ShelfState.CLOSED
        if closer_kind is not None:
            limit = self.length if free_limit is None else free_limit
            self.close_info = CloseInfo(closer_kind, closer_extent, limit)

    def copy(self) -> "Shelf":
        return Shelf(
            id=self.id,
            rect=self.rect,
            orientation=self.orientation,
            height=self.height,
            length=self.length,
            ratio=self.ratio,
            subclass=self.subclass,
            used=self.used,
            state=self.state,
            items=list(self.items),
            close_info=self.close_info,
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "rect": self.rect.to_dict(),
            "orientation": self.orientation.value,
            "height": self.height,
            "length": self.length,
            "ratio": self.ratio,
            "subclass": self.subclass,
            "used": self.used,
            "state": self.state.value,
            "items": [
                {"kind": it.kind, "ref": it.ref, "extent": it.extent, "offset": it.offset}
                for it in self.items
            ],
            "close_info": None
            if self.close_info is None
            else {
                "closer_kind": self.close_info.closer_kind,
                "closer_extent": self.close_info.closer_extent,
                "free_limit": self.close_info.free_limit,
            },
        }
