"""Online packing engine: places each arriving square immediately and
permanently inside the unit container.

Container layout (y grows upward), four rows of height 1/4:

    row 1  y in [0,    0.25)  p1: full-width strip for small squares/columns
    row 2  y in [0.25, 0.50)  p2: same
    row 3  y in [0.50, 0.75)  b3 (class-3 buffer column), b0 (starter
                              strip for small squares), then p3
    row 4  y in [0.75, 1.00)  b1, b2 (buffer columns), the lazy b4+
                              buffer columns, then p4

Medium squares (side in (1/4, 1/2]) ignore the rows: they pack
right-to-left along the floor until one fails to fit, then right-to-left
hanging from the ceiling. At most one large square (side > 1/2) is
accepted, at the upper-right corner.

Small squares (side in (1/8, 1/4]) fill b0 first, then alternate p1/p2
by shortest used length until both close, then alternate p3/p4. Very
small squares (side <= 1/8, subclass k) stack bottom-up inside one open
vertical column per subclass; a full column closes and its successor is
allocated through the small-square routine, the column acting as a
small-square-like item of width h_k.

Every accepted placement passes a collision check against everything
already placed; a failure there reports ``invariant_violation`` (it is
unreachable while the cumulative area stays within the 3/8 budget).
Rejected placements leave the state untouched, with one exception: the
phase transitions above (floor to ceiling, b0 to pair12 to pair34) are
part of the algorithm, are triggered by the first item that fails the
earlier region, and persist even if that item is ultimately rejected.
"""

from __future__ import annotations

from array import array

from . import kernels
from .geometry import AREA_EPS, EPS, PlacedSquare, Rect, rect_contains
from .shelves import NoFitError, Orientation, Shelf
from .sizeclasses import classify, ratio, subclass_params

ROW_H = 0.25

_H1 = subclass_params(1).h  # 0.125
_H2 = subclass_params(2).h  # 0.08875
_H3 = subclass_params(3).h  # one ulp below 0.0576875; kept as the exact product

B0_X = _H3
B0_B3_SPAN = _H3 + ROW_H  # 0.3076875, right edge of the row-3 buffer block
B4_BASE = _H1 + _H2  # 0.21375, origin of the lazy buffer-column strip
P4_X = 0.294  # fixed; the buffer columns top out below 0.2934137

BOTTOM = "bottom"
TOP = "top"
PHASE_B0 = "buffer_b0"
PHASE_PAIR12 = "pair12"
PHASE_PAIR34 = "pair34"


def default_shelves() -> dict[str, Shelf]:
    """The fixed regions of the container, keyed by id."""
    H = Orientation.HORIZONTAL
    V = Orientation.VERTICAL
    return {
        "p1": Shelf("p1", Rect(0.0, 0.0, 1.0, ROW_H), H,
                    height=ROW_H, length=1.0, ratio=0.5, subclass=0),
        "p2": Shelf("p2", Rect(0.0, 0.25, 1.0, ROW_H), H,
                    height=ROW_H, length=1.0, ratio=0.5, subclass=0),
        "b3": Shelf("b3", Rect(0.0, 0.5, _H3, ROW_H), V,
                    height=_H3, length=ROW_H, ratio=ratio(3), subclass=3),
        "b0": Shelf("b0", Rect(B0_X, 0.5, 0.25, ROW_H), H,
                    height=ROW_H, length=0.25, ratio=0.5, subclass=0),
        "p3": Shelf("p3", Rect(B0_B3_SPAN, 0.5, 1.0 - B0_B3_SPAN, ROW_H), H,
                    height=ROW_H, length=1.0 - B0_B3_SPAN, ratio=0.5, subclass=0),
        "b1": Shelf("b1", Rect(0.0, 0.75, _H1, ROW_H), V,
                    height=_H1, length=ROW_H, ratio=ratio(1), subclass=1),
        "b2": Shelf("b2", Rect(_H1, 0.75, _H2, ROW_H), V,
                    height=_H2, length=ROW_H, ratio=ratio(2), subclass=2),
        "p4": Shelf("p4", Rect(P4_X, 0.75, 1.0 - P4_X, ROW_H), H,
                    height=ROW_H, length=1.0 - P4_X, ratio=0.5, subclass=0),
    }


def buffer_column_x(k: int) -> float:
    """Fixed x origin of buffer column b_k for k >= 4."""
    x = B4_BASE
    for j in range(4, k):
        x += subclass_params(j).h
    return x


class PlacementOutcome:
    """Result of one ``place`` call: the placed square, or a rejection."""

    __slots__ = ("status", "square", "reason", "detail")

    def __init__(self, status: str, square: PlacedSquare | None = None,
                 reason: str | None = None, detail: str = "") -> None:
        self.status = status  # "placed" | "rejected"
        self.square = square
        self.reason = reason  # no_fit | budget_exceeded | invariant_violation
        self.detail = detail

    @property
    def placed(self) -> bool:
        return self.status == "placed"

    def to_dict(self) -> dict:
        d: dict = {"status": self.status}
        if self.square is not None:
            d["rect"] = self.square.rect.to_dict()
            d["class"] = self.square.label
            d["shelf_id"] = self.square.shelf_id
        if self.reason is not None:
            d["reason"] = self.reason
        if self.detail:
            d["detail"] = self.detail
        return d

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        if self.placed:
            return f"PlacementOutcome(placed, {self.square!r})"
        return f"PlacementOutcome(rejected, {self.reason}: {self.detail})"


class Packer:
    """One strictly sequential online packing session.

    ``enforce_budget`` (off by default) rejects squares that would push
    the cumulative area past ``budget``; with it off the engine attempts
    any sequence and reports the first genuine failure, which is what
    fuzzing and the interactive playground want. ``record_events`` can
    be switched off to skip the event log in hot loops.
    """

    def __init__(self, *, budget: float = 0.375, enforce_budget: bool = False,
                 record_events: bool = True) -> None:
        self.budget = budget
        self.enforce_budget = enforce_budget
        self.record_events = record_events
        self.shelves = default_shelves()
        self.placements: list[PlacedSquare] = []
        self.cumulative_area = 0.0
        self.medium_phase = BOTTOM
        self.medium_bottom_left = 1.0
        self.medium_top_left = 1.0
        self.small_phase = PHASE_B0
        self.open_columns: dict[int, str] = {}
        self.large: PlacedSquare | None = None
        self.event_log: list[dict] = []
        self._arrivals = 0
        self._seq = 0
        self._column_serial: dict[int, int] = {}
        self._xs = array("d")
        self._ys = array("d")
        self._ss = array("d")

    # ------------------------------------------------------------------
    # bookkeeping

    def _event(self, kind: str, **fields) -> None:
        if not self.record_events:
            return
        self._seq += 1
        entry = {"seq": self._seq, "kind": kind}
        entry.update(fields)
        self.event_log.append(entry)

    def _collides(self, x: float, y: float, w: float, h: float) -> int:
        return kernels.first_collision(
            self._xs, self._ys, self._ss, len(self._ss), x, y, w, h, EPS
        )

    def _reject(self, sq_id: int, height: float, label: str,
                reason: str, detail: str) -> PlacementOutcome:
        self._event(
            "rejected",
            square={"id": sq_id, "height": height, "class": label},
            reason=reason,
            detail=detail,
        )
        return PlacementOutcome("rejected", reason=reason, detail=detail)

    def _commit(self, shelf_id: str, sq_id: int, height: float, label: str,
                x: float, y: float) -> PlacementOutcome:
        sq = PlacedSquare(sq_id, height, x, y, label, shelf_id)
        self.placements.append(sq)
        self._xs.append(x)
        self._ys.append(y)
        self._ss.append(height)
        self.cumulative_area += height * height
        self._event(
            "placed",
            square={"id": sq_id, "height": height, "class": label},
            rect=sq.rect.to_dict(),
            shelf_id=shelf_id,
        )
        return PlacementOutcome("placed", sq)

    # ------------------------------------------------------------------
    # public surface

    def place(self, height: float) -> PlacementOutcome:
        """Place the next square of the online sequence."""
        cls = classify(height)  # raises ValueError outside (0, 1]
        sq_id = self._arrivals
        self._arrivals += 1
        if (
            self.enforce_budget
            and self.cumulative_area + height * height > self.budget + AREA_EPS
        ):
            return self._reject(
                sq_id, height, cls.label, "budget_exceeded",
                f"area {height * height:.12g} exceeds remaining budget "
                f"{self.budget - self.cumulative_area:.12g}",
            )
        if cls.is_large:
            return self._place_large(sq_id, height)
        if cls.is_medium:
            return self._place_medium(sq_id, height)
        if cls.is_small:
            return self._place_small(sq_id, height)
        return self._place_very_small(sq_id, height, cls.k)

    def snapshot(self) -> dict:
        """Serializable, read-only view of the whole session state."""
        return {
            "placements": [s.to_dict() for s in self.placements],
            "shelves": {sid: s.to_dict() for sid, s in self.shelves.items()},
            "large": None if self.large is None else self.large.to_dict(),
            "medium": {
                "phase": self.medium_phase,
                "bottom_left": self.medium_bottom_left,
                "top_left": self.medium_top_left,
                "bottom_state": (
                    "closed_to_medium" if self.medium_phase == TOP else "open"
                ),
            },
            "small_phase": self.small_phase,
            "open_columns": {str(k): v for k, v in sorted(self.open_columns.items())},
            "cumulative_area": self.cumulative_area,
            "count": len(self.placements),
            "budget": self.budget,
            "enforce_budget": self.enforce_budget,
        }

    # ------------------------------------------------------------------
    # large

    def _place_large(self, sq_id: int, h: float) -> PlacementOutcome:
        if self.large is not None:
            return self._reject(
                sq_id, h, "large", "no_fit", "a large square is already placed"
            )
        x = 1.0 - h
        hit = self._collides(x, x, h, h)
        if hit >= 0:
            return self._reject(
                sq_id, h, "large", "no_fit",
                f"corner blocked by square #{self.placements[hit].id}",
            )
        out = self._commit("corner", sq_id, h, "large", x, x)
        self.large = out.square
        return out

    # ------------------------------------------------------------------
    # medium

    def _place_medium(self, sq_id: int, h: float) -> PlacementOutcome:
        if self.medium_phase == BOTTOM:
            x = self.medium_bottom_left - h
            floor = max(self.shelves["p1"].used, self.shelves["p2"].used)
            if x >= floor - EPS:
                hit = self._collides(x, 0.0, h, h)
                if hit >= 0:
                    return self._reject(
                        sq_id, h, "medium", "invariant_violation",
                        f"floor slot overlaps square #{self.placements[hit].id}",
                    )
                self.medium_bottom_left = x
                return self._commit(BOTTOM, sq_id, h, "medium", x, 0.0)
            self.medium_phase = TOP
            self._event("phase_change", detail="medium_phase:bottom->top")
        right = self.medium_top_left
        if self.large is not None:
            right = min(right, self.large.x)
        x = right - h
        y = 1.0 - h
        p3 = self.shelves["p3"]
        p4 = self.shelves["p4"]
        floor = max(B0_B3_SPAN, p3.rect.x + p3.used, p4.rect.x + p4.used)
        if x < floor - EPS:
            return self._reject(
                sq_id, h, "medium", "no_fit",
                f"ceiling blocked: x {x:.12g} below frontier {floor:.12g}",
            )
        hit = self._collides(x, y, h, h)
        if hit >= 0:
            return self._reject(
                sq_id, h, "medium", "invariant_violation",
                f"ceiling slot overlaps square #{self.placements[hit].id}",
            )
        self.medium_top_left = x
        return self._commit(TOP, sq_id, h, "medium", x, y)

    # ------------------------------------------------------------------
    # small (and columns allocated like smalls)

    def _pair34_limit(self) -> float:
        limit = self.medium_top_left
        if self.large is not None:
            limit = min(limit, self.large.x)
        return limit

    def _small_target(self, kind: str, extent: float) -> tuple[Shelf, float]:
        """Pick the horizontal shelf for a small-routine item.

        Advances the documented phase transitions (they stick even if
        the item is rejected later). Returns (shelf, free_limit); raises
        NoFitError when even p3/p4 cannot take the item.
        """
        if self.small_phase == PHASE_B0:
            b0 = self.shelves["b0"]
            if b0.fits(extent):
                return b0, b0.length
            b0.close(kind, extent, b0.length)
            self._event("closed", shelf_id="b0", detail="starter strip full")
            self.small_phase = PHASE_PAIR12
            self._event("phase_change", detail="small_phase:buffer_b0->pair12")
        if self.small_phase == PHASE_PAIR12:
            p1 = self.shelves["p1"]
            p2 = self.shelves["p2"]
            limit = self.medium_bottom_left
            first, second = (p1, p2) if p1.used <= p2.used else (p2, p1)
            for shelf in (first, second):
                if shelf.fits(extent, limit):
                    return shelf, limit
            p1.close(kind, extent, limit)
            p2.close(kind, extent, limit)
            self._event("closed", shelf_id="p1", detail="pair close")
            self._event("closed", shelf_id="p2", detail="pair close")
            self.small_phase = PHASE_PAIR34
            p3 = self.shelves["p3"]
            b0 = self.shelves["b0"]
            new_x = b0.rect.x + b0.used
            assert p3.used == 0.0, "p3 received items before pair34"
            p3.rect = Rect(new_x, p3.rect.y, 1.0 - new_x, p3.rect.h)
            p3.length = 1.0 - new_x
            self._event(
                "phase_change",
                detail=f"small_phase:pair12->pair34 p3_origin:{new_x:.17g}",
            )
        p3 = self.shelves["p3"]
        p4 = self.shelves["p4"]
        limit = self._pair34_limit()
        first, second = (p3, p4) if p3.used <= p4.used else (p4, p3)
        for shelf in (first, second):
            free = limit - shelf.rect.x
            if shelf.fits(extent, free):
                return shelf, free
        raise NoFitError(
            f"no primary strip admits extent {extent:.12g} "
            f"(frontier limit {limit:.12g})"
        )

    def _place_small(self, sq_id: int, h: float) -> PlacementOutcome:
        try:
            shelf, limit = self._small_target("square", h)
        except NoFitError as exc:
            return self._reject(sq_id, h, "small", "no_fit", str(exc))
        rect = shelf.item_rect(h)
        hit = self._collides(rect.x, rect.y, h, h)
        if hit >= 0:
            return self._reject(
                sq_id, h, "small", "invariant_violation",
                f"{shelf.id} slot overlaps square #{self.placements[hit].id}",
            )
        shelf.insert("square", sq_id, h, limit)
        return self._commit(shelf.id, sq_id, h, "small", rect.x, rect.y)

    # ------------------------------------------------------------------
    # very small

    def _alloc_buffer_column(self, k: int) -> Shelf:
        if k <= 3:
            col = self.shelves[f"b{k}"]
        else:
            params = subclass_params(k)
            col = Shelf(
                f"b{k}",
                Rect(buffer_column_x(k), 0.75, params.h, ROW_H),
                Orientation.VERTICAL,
                height=params.h,
                length=ROW_H,
                ratio=params.r,
                subclass=k,
            )
            self.shelves[col.id] = col
            self._event(
                "placed",
                column={"id": col.id, "width": col.height},
                rect=col.rect.to_dict(),
                shelf_id=None,
            )
        self.open_columns[k] = col.id
        self._column_serial[k] = 1
        return col

    def _place_very_small(self, sq_id: int, h: float, k: int) -> PlacementOutcome:
        label = f"sub{k}"
        col_id = self.open_columns.get(k)
        col = self.shelves[col_id] if col_id else self._alloc_buffer_column(k)
        if col.fits(h):
            rect = col.item_rect(h)
            hit = self._collides(rect.x, rect.y, h, h)
            if hit >= 0 or not rect_contains(col.rect, rect, EPS):
                return self._reject(
                    sq_id, h, label, "invariant_violation",
                    f"column {col.id} slot conflicts at ({rect.x:.12g}, {rect.y:.12g})",
                )
            col.insert("square", sq_id, h)
            return self._commit(col.id, sq_id, h, label, rect.x, rect.y)
        # The open column is full: close it and allocate a successor of
        # width h_k through the small-square routine, then stack there.
        width = col.height
        try:
            host, limit = self._small_target("column", width)
        except NoFitError as exc:
            return self._reject(sq_id, h, label, "no_fit", str(exc))
        col_rect = host.column_rect(width)
        hit = self._collides(col_rect.x, col_rect.y, col_rect.w, col_rect.h)
        if hit >= 0:
            return self._reject(
                sq_id, h, label, "invariant_violation",
                f"column slot in {host.id} overlaps square #{self.placements[hit].id}",
            )
        col.close("square", h, col.length)
        self._event(
            "closed", shelf_id=col.id, detail=f"column full; successor in {host.id}"
        )
        serial = self._column_serial.get(k, 1) + 1
        self._column_serial[k] = serial
        new_col = Shelf(
            f"c{k}-{serial}",
            col_rect,
            Orientation.VERTICAL,
            height=width,
            length=col_rect.h,
            ratio=ratio(k),
            subclass=k,
        )
        host.insert("column", new_col.id, width, limit)
        self.shelves[new_col.id] = new_col
        self.open_columns[k] = new_col.id
        self._event(
            "placed",
            column={"id": new_col.id, "width": width},
            rect=col_rect.to_dict(),
            shelf_id=host.id,
        )
        rect = new_col.item_rect(h)
        new_col.insert("square", sq_id, h)
        return self._commit(new_col.id, sq_id, h, label, rect.x, rect.y)
