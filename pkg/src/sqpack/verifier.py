"""Independent audits of packing snapshots.

Every audit is a pure function of a snapshot dictionary (as produced by
``Packer.snapshot``) returning an ``AuditReport``; violations are
reported, never thrown. ``audit_geometry`` is the brute-force ground
truth: an all-pairs interior-overlap scan plus containment in the unit
container. The density audits check the physically measurable
consequences of the shelf discipline:

* a closed class-1 column holds exactly two squares and at least half of
  its area;
* a closed class-k column (k >= 2) plus the square that closed it covers
  at least half of the column area;
* a closed horizontal shelf whose items are all squares and whose closer
  was a square satisfies the shelf-waste bound
  ``content + e^2 > L*h*r - (h*r)^2 + e*h*r`` where ``L`` is the
  recorded usable length at close time and ``e`` the closer's side;
* once the p1/p2 pair has closed, the buffer half of the container
  (p1, p2, b0 and every buffer column) holds at least 7/32 of area;
* while the cumulative area is at most 1/8, enough of the top-right
  corner stays clear for the largest square the budget still allows.

``simulate_shelf_fill`` exercises the shelf-waste bound directly on
synthetic shelves with random admissible fills.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass, field

from . import kernels
from .geometry import AREA_EPS, EPS, Rect, intersection_area
from .sizeclasses import classify

#: Minimum packed area in p1 u p2 u b0 u buffer columns once p1/p2 close.
PAIR_REGION_BOUND = 7.0 / 32.0

#: At most this many violations of one rule are itemized per audit.
MAX_REPORTED = 20


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str
    ids: tuple = ()


@dataclass
class AuditReport:
    violations: list[Violation] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: str, detail: str, ids: tuple = ()) -> None:
        self.violations.append(Violation(rule, detail, tuple(ids)))

    def extend(self, other: "AuditReport") -> "AuditReport":
        self.violations.extend(other.violations)
        self.stats.update(other.stats)
        return self

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"rule": v.rule, "detail": v.detail, "ids": list(v.ids)}
                for v in self.violations
            ],
            "stats": self.stats,
        }

    def lines(self) -> list[str]:
        if self.ok:
            return ["audit ok"]
        return [f"{v.rule}: {v.detail}" for v in self.violations]


def _columns(placements: list[dict]):
    xs = array("d", [p["x"] for p in placements])
    ys = array("d", [p["y"] for p in placements])
    ss = array("d", [p["height"] for p in placements])
    return xs, ys, ss


def _rect(d: dict) -> Rect:
    return Rect(d["x"], d["y"], d["w"], d["h"])


# ----------------------------------------------------------------------
# geometry


def audit_geometry(snapshot: dict) -> AuditReport:
    """All-pairs non-overlap and unit-container containment."""
    report = AuditReport()
    placements = snapshot.get("placements", [])
    n = len(placements)
    total = sum(p["height"] * p["height"] for p in placements)
    report.stats["count"] = n
    report.stats["total_area"] = total
    if n == 0:
        return report
    xs, ys, ss = _columns(placements)
    i, j = kernels.first_overlap_pair(xs, ys, ss, n, EPS)
    if i >= 0:
        # Fall back to an exhaustive scan so the report is complete.
        found = 0
        for a in range(n):
            ra = Rect(xs[a], ys[a], ss[a], ss[a])
            for b in range(a + 1, n):
                rb = Rect(xs[b], ys[b], ss[b], ss[b])
                if (
                    min(ra.x2, rb.x2) - max(ra.x, rb.x) > EPS
                    and min(ra.y2, rb.y2) - max(ra.y, rb.y) > EPS
                ):
                    report.add(
                        "overlap",
                        f"squares #{placements[a]['id']} and "
                        f"#{placements[b]['id']} intersect",
                        (placements[a]["id"], placements[b]["id"]),
                    )
                    found += 1
                    if found >= MAX_REPORTED:
                        return report
    if kernels.first_outside_unit(xs, ys, ss, n, EPS) >= 0:
        found = 0
        for a in range(n):
            if (
                xs[a] < -EPS
                or ys[a] < -EPS
                or xs[a] + ss[a] > 1.0 + EPS
                or ys[a] + ss[a] > 1.0 + EPS
            ):
                p = placements[a]
                report.add(
                    "containment",
                    f"square #{p['id']} at ({p['x']:.12g}, {p['y']:.12g}) "
                    f"side {p['height']:.12g} leaves the container",
                    (p["id"],),
                )
                found += 1
                if found >= MAX_REPORTED:
                    break
    return report


# ----------------------------------------------------------------------
# shelf discipline


def audit_shelf_discipline(snapshot: dict) -> AuditReport:
    """Bookkeeping and class rules for every shelf.

    Square items must have side in (h*r, h]; offsets must be the prefix
    sums of extents; used must equal the extent total and stay within
    the length; square items must sit inside the shelf rect at the
    recorded offsets; at most one open column per subclass.
    """
    report = AuditReport()
    shelves = snapshot.get("shelves", {})
    by_id = {p["id"]: p for p in snapshot.get("placements", [])}
    open_by_subclass: dict[int, list[str]] = {}
    for sid, sh in shelves.items():
        rect = _rect(sh["rect"])
        h = sh["height"]
        r = sh["ratio"]
        vertical = sh["orientation"] == "vertical"
        if vertical and sh["state"] == "open":
            open_by_subclass.setdefault(sh["subclass"], []).append(sid)
        running = 0.0
        for item in sh["items"]:
            if abs(item["offset"] - running) > AREA_EPS:
                report.add(
                    "flush",
                    f"{sid}: item {item['ref']} offset {item['offset']:.12g} "
                    f"!= prefix sum {running:.12g}",
                    (sid, item["ref"]),
                )
            running += item["extent"]
            if item["kind"] == "square":
                side = item["extent"]
                if not (h * r < side <= h + EPS):
                    report.add(
                        "class_interval",
                        f"{sid}: square side {side:.12g} outside "
                        f"({h * r:.12g}, {h:.12g}]",
                        (sid, item["ref"]),
                    )
                placed = by_id.get(item["ref"])
                if placed is None:
                    report.add(
                        "bookkeeping",
                        f"{sid}: square item {item['ref']} has no placement",
                        (sid, item["ref"]),
                    )
                    continue
                if vertical:
                    ex, ey = rect.x, rect.y + item["offset"]
                else:
                    ex, ey = rect.x + item["offset"], rect.y
                if abs(placed["x"] - ex) > AREA_EPS or abs(placed["y"] - ey) > AREA_EPS:
                    report.add(
                        "flush",
                        f"{sid}: square #{placed['id']} at "
                        f"({placed['x']:.12g}, {placed['y']:.12g}), "
                        f"expected ({ex:.12g}, {ey:.12g})",
                        (sid, placed["id"]),
                    )
                sq = Rect(placed["x"], placed["y"], side, side)
                if not (
                    sq.x >= rect.x - EPS
                    and sq.y >= rect.y - EPS
                    and sq.x2 <= rect.x2 + EPS
                    and sq.y2 <= rect.y2 + EPS
                ):
                    report.add(
                        "shelf_containment",
                        f"{sid}: square #{placed['id']} leaves the shelf rect",
                        (sid, placed["id"]),
                    )
                want = "sub" + str(sh["subclass"]) if vertical else "small"
                try:
                    actual = classify(side).label
                except ValueError:
                    actual = "unclassifiable"
                if placed["class"] != want or actual != want:
                    report.add(
                        "class_interval",
                        f"{sid}: square #{placed['id']} classed "
                        f"{placed['class']}, shelf expects {want}",
                        (sid, placed["id"]),
                    )
            else:  # column item
                ref = item["ref"]
                col = shelves.get(ref)
                if col is None:
                    report.add(
                        "bookkeeping",
                        f"{sid}: column item {ref} has no shelf",
                        (sid, ref),
                    )
                    continue
                if abs(col["height"] - item["extent"]) > EPS:
                    report.add(
                        "bookkeeping",
                        f"{sid}: column {ref} width {col['height']:.12g} != "
                        f"item extent {item['extent']:.12g}",
                        (sid, ref),
                    )
                crect = _rect(col["rect"])
                if abs(crect.x - (rect.x + item["offset"])) > AREA_EPS or abs(
                    crect.y - rect.y
                ) > EPS:
                    report.add(
                        "flush",
                        f"{sid}: column {ref} rect origin off its offset",
                        (sid, ref),
                    )
        if abs(running - sh["used"]) > AREA_EPS:
            report.add(
                "bookkeeping",
                f"{sid}: used {sh['used']:.12g} != item extents {running:.12g}",
                (sid,),
            )
        if sh["used"] > sh["length"] + EPS:
            report.add(
                "bookkeeping",
                f"{sid}: used {sh['used']:.12g} exceeds length {sh['length']:.12g}",
                (sid,),
            )
    for k, ids in open_by_subclass.items():
        if len(ids) > 1:
            report.add(
                "open_columns",
                f"subclass {k} has {len(ids)} open columns: {', '.join(ids)}",
                tuple(ids),
            )
    declared = snapshot.get("open_columns", {})
    for k_str, sid in declared.items():
        sh = shelves.get(sid)
        if sh is None or sh["state"] != "open":
            report.add(
                "open_columns",
                f"declared open column {sid} (subclass {k_str}) is missing or closed",
                (sid,),
            )
    report.stats["open_columns"] = {
        str(k): ids for k, ids in sorted(open_by_subclass.items())
    }
    return report


# ----------------------------------------------------------------------
# density of closed shelves


def audit_closed_shelf_density(snapshot: dict) -> AuditReport:
    """Density bounds for closed shelves.

    Closed columns: class 1 must hold exactly two squares and at least
    half the column area in content alone; class k >= 2 must reach half
    the column area counting the recorded closing square as well (that
    square lands in the successor column, whose content it seeds).
    Closed horizontal shelves are checked against the shelf-waste bound
    when their items are all squares and the closer was a square; mixed
    shelves are covered by the synthetic simulations instead, because a
    column's eventual content is not observable at close time.
    """
    report = AuditReport()
    shelves = snapshot.get("shelves", {})
    densities: dict[str, float] = {}
    for sid, sh in shelves.items():
        if sh["state"] != "closed":
            continue
        vertical = sh["orientation"] == "vertical"
        content = sum(
            it["extent"] * it["extent"]
            for it in sh["items"]
            if it["kind"] == "square"
        )
        info = sh.get("close_info")
        if vertical:
            h = sh["height"]
            bound = 0.5 * h * sh["length"]
            k = sh["subclass"]
            if k == 1:
                squares = [it for it in sh["items"] if it["kind"] == "square"]
                if len(squares) != 2:
                    report.add(
                        "column_density",
                        f"{sid}: closed class-1 column holds "
                        f"{len(squares)} squares, expected 2",
                        (sid,),
                    )
                lhs = content
            else:
                closer_area = 0.0
                if info is not None and info["closer_kind"] == "square":
                    closer_area = info["closer_extent"] * info["closer_extent"]
                lhs = content + closer_area
            densities[sid] = content / (h * sh["length"])
            if lhs < bound - AREA_EPS:
                report.add(
                    "column_density",
                    f"{sid}: closed column area {lhs:.12g} below half "
                    f"of {h * sh['length']:.12g}",
                    (sid,),
                )
        else:
            if info is None or info["closer_kind"] != "square":
                continue
            if any(it["kind"] != "square" for it in sh["items"]):
                continue
            h = sh["height"]
            r = sh["ratio"]
            e = info["closer_extent"]
            lim = info["free_limit"]
            lhs = content + e * e
            rhs = lim * h * r - (h * r) ** 2 + e * h * r
            densities[sid] = content / max(lim * h, 1e-30)
            if lhs <= rhs - AREA_EPS:
                report.add(
                    "shelf_waste",
                    f"{sid}: content {content:.12g} + closer {e:.12g}^2 "
                    f"= {lhs:.12g} not above bound {rhs:.12g}",
                    (sid,),
                )
    report.stats["closed_densities"] = densities
    return report


# ----------------------------------------------------------------------
# pair close region bound


def _pair_region_rects(snapshot: dict) -> list[Rect]:
    shelves = snapshot.get("shelves", {})
    rects = []
    for sid, sh in shelves.items():
        if sid in ("p1", "p2", "b0"):
            rects.append(_rect(sh["rect"]))
        elif sid.startswith("b") and sh["subclass"] >= 1:
            rects.append(_rect(sh["rect"]))
    return rects


def audit_pair_close(snapshot: dict) -> AuditReport:
    """Once p1/p2 have closed, their half of the container is half full.

    Vacuous while the small routine has not reached pair34. The region
    is p1 u p2 u b0 u every buffer column (disjoint rects), and the
    check sums each placement's physical intersection with it.
    """
    report = AuditReport()
    if snapshot.get("small_phase") != "pair34":
        report.stats["pair_close"] = "not closed"
        return report
    region = _pair_region_rects(snapshot)
    covered = 0.0
    for p in snapshot.get("placements", []):
        sq = Rect(p["x"], p["y"], p["height"], p["height"])
        for rect in region:
            covered += intersection_area(sq, rect)
    report.stats["pair_region_covered"] = covered
    report.stats["pair_region_bound"] = PAIR_REGION_BOUND
    if covered < PAIR_REGION_BOUND - AREA_EPS:
        report.add(
            "pair_close",
            f"buffer half holds {covered:.12g} < {PAIR_REGION_BOUND} after "
            "p1/p2 closed",
        )
    return report


# ----------------------------------------------------------------------
# large-square reservation


def audit_large_reservation(snapshot: dict) -> AuditReport:
    """While area <= 1/8, the worst-case large square still fits.

    The used frontier of p1/p2 plus the side of the largest square the
    remaining budget allows must not exceed the container edge.
    """
    report = AuditReport()
    area = snapshot.get("cumulative_area", 0.0)
    if area > 0.125:
        report.stats["large_reservation"] = "beyond 1/8"
        return report
    shelves = snapshot.get("shelves", {})
    lu = max(shelves["p1"]["used"], shelves["p2"]["used"])
    reach = lu + math.sqrt(0.375 - area)
    report.stats["large_reservation_reach"] = reach
    if reach > 1.0 + AREA_EPS:
        report.add(
            "large_reservation",
            f"frontier {lu:.12g} + possible large side "
            f"{math.sqrt(0.375 - area):.12g} = {reach:.12g} > 1",
        )
    return report


# ----------------------------------------------------------------------
# combined


def audit_all(snapshot: dict) -> AuditReport:
    """Run every audit and merge the reports."""
    report = AuditReport()
    report.extend(audit_geometry(snapshot))
    report.extend(audit_shelf_discipline(snapshot))
    report.extend(audit_closed_shelf_density(snapshot))
    report.extend(audit_pair_close(snapshot))
    report.extend(audit_large_reservation(snapshot))
    return report


# ----------------------------------------------------------------------
# synthetic shelf-fill simulation


def simulate_shelf_fill(height: float, ratio: float, length: float, rand) -> dict:
    """Fill a synthetic shelf until the first failure; report the waste bound.

    ``rand`` is a callable returning uniforms in [0, 1). Admissible
    sides are drawn uniformly from (height*ratio, height]; the fill
    stops at the first square that no longer fits. The returned mapping
    carries the bound components and ``ok``: whether
    ``content + e^2 > L*h*r - (h*r)^2 + e*h*r`` held strictly (within
    the area tolerance).
    """
    floor = height * ratio
    used = 0.0
    content = 0.0
    count = 0
    while True:
        side = floor + (height - floor) * (1.0 - rand())
        if used + side <= length + EPS:
            used += side
            content += side * side
            count += 1
        else:
            closer = side
            break
    lhs = content + closer * closer
    rhs = length * height * ratio - (height * ratio) ** 2 + closer * height * ratio
    return {
        "height": height,
        "ratio": ratio,
        "length": length,
        "count": count,
        "used": used,
        "content": content,
        "closer": closer,
        "lhs": lhs,
        "rhs": rhs,
        "ok": lhs > rhs - AREA_EPS,
    }
