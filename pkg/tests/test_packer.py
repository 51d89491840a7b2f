"""The incremental packing engine: worked examples, phase machinery,
rejection semantics, determinism, and the packing guarantee as a
property test.

Expected coordinates in the worked examples are hand-derived from the
layout constants (rows of height 1/4, the buffer block in the upper
left) and were cross-checked against independent arithmetic before
being frozen.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqpack.geometry import AREA_EPS, EPS
from sqpack.packer import (
    B0_B3_SPAN,
    B4_BASE,
    P4_X,
    PHASE_B0,
    PHASE_PAIR12,
    PHASE_PAIR34,
    Packer,
    PlacementOutcome,
    buffer_column_x,
    default_shelves,
)
from sqpack.sizeclasses import subclass_params
from sqpack.verifier import audit_all

H1 = subclass_params(1).h
H2 = subclass_params(2).h
H3 = subclass_params(3).h
H4 = subclass_params(4).h


def place_all(packer, heights):
    return [packer.place(h) for h in heights]


def assert_all_placed(outcomes):
    for o in outcomes:
        assert o.placed, f"{o.square.height if o.square else '?'}: {o.reason} {o.detail}"


# ---------------------------------------------------------------- layout


def test_default_shelves_layout():
    shelves = default_shelves()
    assert list(shelves) == ["p1", "p2", "b3", "b0", "p3", "b1", "b2", "p4"]
    r = {k: s.rect for k, s in shelves.items()}
    assert (r["p1"].x, r["p1"].y, r["p1"].w, r["p1"].h) == (0.0, 0.0, 1.0, 0.25)
    assert (r["p2"].x, r["p2"].y) == (0.0, 0.25)
    assert (r["b3"].x, r["b3"].y, r["b3"].w, r["b3"].h) == (0.0, 0.5, H3, 0.25)
    assert (r["b0"].x, r["b0"].y, r["b0"].w) == (H3, 0.5, 0.25)
    assert (r["p3"].x, r["p3"].y) == (B0_B3_SPAN, 0.5)
    assert r["p3"].w == 1.0 - B0_B3_SPAN
    assert (r["b1"].x, r["b1"].y, r["b1"].w) == (0.0, 0.75, H1)
    assert (r["b2"].x, r["b2"].y, r["b2"].w) == (H1, 0.75, H2)
    assert (r["p4"].x, r["p4"].y, r["p4"].w) == (P4_X, 0.75, 1.0 - P4_X)
    # Buffer geometry invariants.
    assert B0_B3_SPAN == 0.3076875
    assert B4_BASE == H1 + H2 == 0.21375


def test_buffer_column_positions():
    assert buffer_column_x(4) == B4_BASE
    assert buffer_column_x(5) == B4_BASE + H4
    assert buffer_column_x(6) == B4_BASE + H4 + subclass_params(5).h
    # The whole lazy strip stays left of the quarter-row shelf at 0.294.
    x = B4_BASE
    for k in range(4, 40):
        x += subclass_params(k).h
    assert x < P4_X


# ------------------------------------------------------------ large class


def test_large_goes_to_corner():
    p = Packer()
    (o,) = place_all(p, [0.6])
    assert o.placed
    assert (o.square.x, o.square.y) == (pytest.approx(0.4), pytest.approx(0.4))
    assert o.square.shelf_id == "corner"
    assert p.large is o.square


def test_large_75_touches_quarter_corner():
    p = Packer()
    (o,) = place_all(p, [0.75])
    assert (o.square.x, o.square.y) == (0.25, 0.25)


def test_second_large_rejected_no_fit():
    p = Packer()
    o1, o2 = place_all(p, [0.51, 0.51])
    assert o1.placed
    assert not o2.placed
    assert o2.reason == "no_fit"
    # The rejection left no trace in the container.
    assert len(p.placements) == 1
    assert audit_all(p.snapshot()).ok


# ----------------------------------------------------------- medium class


def test_mediums_fill_bottom_right_to_left():
    p = Packer()
    outcomes = place_all(p, [0.27] * 5)
    assert_all_placed(outcomes)
    coords = [(round(o.square.x, 6), round(o.square.y, 6), o.square.shelf_id)
              for o in outcomes]
    assert coords == [
        (0.73, 0.0, "bottom"),
        (0.46, 0.0, "bottom"),
        (0.19, 0.0, "bottom"),
        (0.73, 0.73, "top"),
        (0.46, 0.73, "top"),
    ]
    assert p.medium_phase == "top"


def test_mediums_0_3_example():
    p = Packer()
    outcomes = place_all(p, [0.3] * 4)
    assert_all_placed(outcomes)
    coords = [(round(o.square.x, 6), round(o.square.y, 6)) for o in outcomes]
    assert coords == [(0.7, 0.0), (0.4, 0.0), (0.1, 0.0), (0.7, 0.7)]


def test_bottom_phase_blocked_by_small_frontier():
    # Small squares advance the floor frontier; a medium that would land
    # left of it moves the machine to the top phase permanently.
    p = Packer()
    place_all(p, [0.2] * 9)  # b0 takes one, p1/p2 take four each (0.8 used)
    o = p.place(0.26)
    assert o.placed
    assert (o.square.x, o.square.y) == (pytest.approx(0.74), pytest.approx(0.74))
    assert o.square.shelf_id == "top"
    assert p.medium_phase == "top"


def test_top_phase_persists_after_transition():
    p = Packer()
    place_all(p, [0.3] * 3)  # fills the bottom row
    p.place(0.3)  # forces the transition to top
    assert p.medium_phase == "top"
    o = p.place(0.26)
    assert o.placed and o.square.shelf_id == "top"
    # Even a medium that would have fit on the floor stays on top now.
    assert o.square.y == pytest.approx(0.74)


def test_top_mediums_clip_to_large_corner():
    # With a large square present the top run starts at the large's left
    # edge. Since that edge is always below 1/2 and mediums are wider
    # than 1/4, the clipped slot always ends left of the buffer block at
    # 0.3076875 -- such a request (necessarily over budget) must be a
    # clean no_fit rather than an overlap with the large square.
    p = Packer()
    o_large = p.place(0.51)
    assert o_large.placed and o_large.square.x == pytest.approx(0.49)
    place_all(p, [0.3] * 3)  # fill the bottom row
    o = p.place(0.26)
    assert not o.placed
    assert o.reason == "no_fit"
    assert p.medium_phase == "top"  # the documented transition persists
    assert len(p.placements) == 4
    assert audit_all(p.snapshot()).ok


def test_top_phase_exhaustion_is_no_fit():
    p = Packer()
    outcomes = place_all(p, [0.3] * 6)
    # Bottom row takes three (0.7, 0.4, 0.1); top takes two (0.7, 0.4);
    # the sixth would start at 0.1, inside the buffer block: no_fit.
    assert [o.placed for o in outcomes] == [True] * 5 + [False]
    assert outcomes[5].reason == "no_fit"
    assert len(p.placements) == 5
    assert audit_all(p.snapshot()).ok


def test_bottom_medium_collision_is_invariant_violation():
    # A deliberately over-budget large square reaches into the bottom
    # strip; the per-placement collision safety net must catch the floor
    # medium before it overlaps, and report it as an invariant breach.
    p = Packer()
    o1 = p.place(0.9)
    assert o1.placed and o1.square.x == pytest.approx(0.1)
    o2 = p.place(0.3)
    assert not o2.placed
    assert o2.reason == "invariant_violation"
    assert p.medium_phase == "bottom"  # no documented transition happened
    assert audit_all(p.snapshot()).ok


# ------------------------------------------------------------ small class


def test_first_small_goes_to_buffer_strip():
    p = Packer()
    (o,) = place_all(p, [0.2])
    assert o.square.shelf_id == "b0"
    assert (o.square.x, o.square.y) == (H3, 0.5)
    assert p.small_phase == PHASE_B0


def test_buffer_strip_close_moves_to_pair12():
    p = Packer()
    o1, o2 = place_all(p, [0.2, 0.15])
    assert o1.square.shelf_id == "b0"
    assert o2.square.shelf_id == "p1"
    assert (o2.square.x, o2.square.y) == (0.0, 0.0)
    assert p.small_phase == PHASE_PAIR12
    assert not p.shelves["b0"].is_open


def test_pair12_alternates_by_shortest_used():
    p = Packer()
    place_all(p, [0.2])  # b0
    outcomes = place_all(p, [0.2, 0.2, 0.2, 0.2])
    shelf_ids = [o.square.shelf_id for o in outcomes]
    assert shelf_ids == ["p1", "p2", "p1", "p2"]  # ties break to p1
    assert p.shelves["p1"].used == pytest.approx(0.4)
    assert p.shelves["p2"].used == pytest.approx(0.4)


def test_pair12_free_limit_tracks_bottom_mediums():
    p = Packer()
    p.place(0.3)  # bottom medium: floor frontier moves to 0.7
    o = p.place(0.2)
    assert o.square.shelf_id == "b0"
    place_all(p, [0.2] * 6)  # p1/p2 three each -> 0.6 used
    o = p.place(0.14)
    assert o.placed  # 0.6 + 0.14 = 0.74 > 0.7? no: must respect the limit
    # With the frontier at 0.7, a square is admitted only up to 0.7.
    assert p.shelves[o.square.shelf_id].used <= 0.7 + EPS


def test_pair_close_transition_annexes_buffer_tail():
    p = Packer()
    place_all(p, [0.2] * 9)
    o = p.place(0.21)  # fits neither p1 (0.8 used) nor p2 (0.8 used)
    assert o.placed
    assert o.square.shelf_id == "p3"
    assert (o.square.x, o.square.y) == (pytest.approx(0.2576875), 0.5)
    assert p.small_phase == PHASE_PAIR34
    p3 = p.shelves["p3"]
    # p3's origin annexed the unused tail of the buffer strip.
    assert p3.rect.x == pytest.approx(H3 + 0.2)
    assert p3.rect.w == pytest.approx(1.0 - (H3 + 0.2))
    for pid in ("p1", "p2"):
        shelf = p.shelves[pid]
        assert not shelf.is_open
        assert shelf.close_info.closer_extent == 0.21
    assert audit_all(p.snapshot()).ok


def test_pair34_limit_respects_large_edge():
    # With a large at x = 0.49, the pair34 shelves stop at that edge:
    # p3 (origin 0.2576875 after annexation) has room for exactly one
    # more 0.21 square, p4 (origin 0.294) for none.
    p = Packer()
    p.place(0.51)  # large at x = 0.49
    place_all(p, [0.2] * 9)
    assert p.place(0.21).placed  # pair close -> pair34, lands in p3
    o = p.place(0.21)
    assert not o.placed and o.reason == "no_fit"
    snap = p.snapshot()
    assert audit_all(snap).ok
    # Everything in the pair34 row sits left of the large square's edge.
    for pl in snap["placements"]:
        if pl["shelf_id"] in ("p3", "p4"):
            assert pl["x"] + pl["height"] <= 0.49 + EPS


def test_pair34_two_shelves_absorb_quarter_squares():
    # Without a large square, pair34 runs to the container edge: after
    # the pair close at 0.2576875, p3 holds floor(0.7423 / 0.21) = 3
    # squares and p4 floor(0.706 / 0.21) = 3 more.
    p = Packer()
    place_all(p, [0.2] * 9)
    outcomes = place_all(p, [0.21] * 7)
    assert [o.placed for o in outcomes] == [True] * 6 + [False]
    shelf_ids = [o.square.shelf_id for o in outcomes[:6]]
    assert shelf_ids.count("p3") == 3
    assert shelf_ids.count("p4") == 3
    assert audit_all(p.snapshot()).ok


def test_small_no_fit_after_pair34_exhausted():
    # Over-budget stream of 0.25 squares: b0 one, p1/p2 four each, then
    # p3/p4 fill; eventually no shelf can take another quarter square.
    p = Packer()
    outcomes = place_all(p, [0.25] * 16)
    statuses = [o.placed for o in outcomes]
    assert not all(statuses)
    first_fail = statuses.index(False)
    assert outcomes[first_fail].reason == "no_fit"
    # State is still sound after the failure.
    assert audit_all(p.snapshot()).ok
    # Total area of 0.25-squares actually placed:
    assert p.cumulative_area == pytest.approx(first_fail * 0.0625)


# ------------------------------------------------------- very small class


def test_very_small_starts_buffer_columns():
    p = Packer()
    o1 = p.place(0.12)  # subclass 1
    assert o1.square.shelf_id == "b1"
    assert (o1.square.x, o1.square.y) == (0.0, 0.75)
    o2 = p.place(0.07)  # subclass 2
    assert o2.square.shelf_id == "b2"
    assert (o2.square.x, o2.square.y) == (H1, 0.75)
    o3 = p.place(0.05)  # subclass 3
    assert o3.square.shelf_id == "b3"
    assert (o3.square.x, o3.square.y) == (0.0, 0.5)
    o4 = p.place(0.03)  # subclass 4: lazy buffer column
    assert o4.square.shelf_id == "b4"
    assert (o4.square.x, o4.square.y) == (B4_BASE, 0.75)
    assert p.open_columns == {1: "b1", 2: "b2", 3: "b3", 4: "b4"}


def test_column_stacking_bottom_up():
    p = Packer()
    o1, o2 = place_all(p, [0.12, 0.11])
    assert (o1.square.x, o1.square.y) == (0.0, 0.75)
    assert (o2.square.x, o2.square.y) == (0.0, pytest.approx(0.87))


def test_full_column_spawns_successor_in_buffer_strip():
    p = Packer()
    outcomes = place_all(p, [0.11, 0.09, 0.1])
    assert_all_placed(outcomes)
    assert [o.square.shelf_id for o in outcomes] == ["b1", "b1", "c1-2"]
    third = outcomes[2].square
    assert (third.x, third.y) == (H3, 0.5)
    b1 = p.shelves["b1"]
    assert not b1.is_open
    assert b1.close_info.closer_kind == "square"
    assert b1.close_info.closer_extent == 0.1
    assert b1.close_info.free_limit == 0.25
    # The successor column is registered as the open column for class 1
    # and embedded as a column item of the buffer strip.
    assert p.open_columns[1] == "c1-2"
    host_items = p.shelves["b0"].items
    assert host_items[0].kind == "column" and host_items[0].ref == "c1-2"
    assert p.shelves["c1-2"].rect.w == H1
    assert audit_all(p.snapshot()).ok


def test_column_chain_over_many_closures():
    # Repeatedly filling class-1 columns must chain successors c1-2,
    # c1-3, ... through the small machinery without ever overlapping.
    p = Packer()
    h = 0.125 * 0.999
    serials = set()
    for _ in range(40):
        o = p.place(h)
        if not o.placed:
            break
        serials.add(o.square.shelf_id)
    assert {"b1", "c1-2", "c1-3"} <= serials
    assert audit_all(p.snapshot()).ok


def test_successor_failure_leaves_column_open():
    """When no shelf can host a successor column, the rejection must
    leave the full column open and otherwise untouched."""
    p = Packer()
    place_all(p, [0.25] * 13)  # occupy b0 and the pair shelves entirely
    assert p.small_phase == PHASE_PAIR34
    # Fill the class-1 buffer column: 2 squares of 0.125 fill it exactly.
    assert p.place(0.125).placed
    assert p.place(0.125).placed
    b1 = p.shelves["b1"]
    assert b1.used == pytest.approx(0.25)
    before = p.snapshot()
    o = p.place(0.125)  # needs a successor column; the smalls are full
    if not o.placed:
        assert o.reason == "no_fit"
        assert b1.is_open  # the old column did NOT close
        assert p.snapshot() == before
        assert audit_all(p.snapshot()).ok
    else:
        # If a slot still existed the engine must have used it cleanly.
        assert audit_all(p.snapshot()).ok


# --------------------------------------------------- outcomes and budget


def test_outcome_dict_shapes():
    p = Packer()
    d = p.place(0.3).to_dict()
    assert d == {
        "status": "placed",
        "rect": {"x": 0.7, "y": 0.0, "w": 0.3, "h": 0.3},
        "class": "medium",
        "shelf_id": "bottom",
    }
    d2 = Packer(enforce_budget=True, budget=0.05).place(0.3).to_dict()
    assert d2["status"] == "rejected"
    assert d2["reason"] == "budget_exceeded"
    assert "detail" in d2


def test_budget_enforcement_off_by_default():
    p = Packer()
    assert p.place(0.5).placed
    assert p.place(0.5).placed  # 0.5 total area, over 3/8, still accepted
    assert p.cumulative_area == pytest.approx(0.5)


def test_budget_enforcement_on():
    p = Packer(enforce_budget=True)
    assert p.place(0.5).placed  # area 0.25
    assert p.place(0.35).placed  # 0.3725 total
    o = p.place(0.06)  # 0.0036 more would pass 0.375? 0.3761 > budget
    assert not o.placed and o.reason == "budget_exceeded"
    # Rejection consumed no budget.
    assert p.cumulative_area == pytest.approx(0.3725)
    assert p.place(0.05).placed  # 0.375 exactly: allowed


def test_rejections_do_not_mutate_state():
    p = Packer()
    place_all(p, [0.51])
    before = p.snapshot()
    o = p.place(0.52)
    assert not o.placed
    assert p.snapshot() == before


# ------------------------------------------------- events and determinism


def test_event_log_structure():
    p = Packer()
    p.place(0.2)
    p.place(0.15)
    kinds = [(e["seq"], e["kind"]) for e in p.event_log]
    # 0.2 placed; then the 0.15 triggered: b0 closed, phase change, placed.
    assert kinds[0] == (1, "placed")
    assert [k for _, k in kinds].count("closed") == 1
    assert [k for _, k in kinds].count("phase_change") == 1
    seqs = [e["seq"] for e in p.event_log]
    assert seqs == sorted(seqs) and len(set(seqs)) == len(seqs)


def test_event_log_optional():
    p = Packer(record_events=False)
    p.place(0.2)
    p.place(0.15)
    assert p.event_log == []


def test_identical_sequences_identical_state():
    heights = [0.2, 0.3, 0.12, 0.07, 0.26, 0.05, 0.2, 0.03, 0.11, 0.2]
    a, b = Packer(), Packer()
    ra = [a.place(h).to_dict() for h in heights]
    rb = [b.place(h).to_dict() for h in heights]
    assert ra == rb
    assert a.snapshot() == b.snapshot()
    assert a.event_log == b.event_log


# -------------------------------------------------- the packing guarantee


def in_budget_heights(draw_heights):
    total, kept = 0.0, []
    for h in draw_heights:
        if total + h * h > 0.375:
            continue
        kept.append(h)
        total += h * h
    return kept


@settings(max_examples=150, deadline=None)
@given(st.lists(st.floats(min_value=0.001, max_value=1.0,
                          allow_nan=False, allow_infinity=False),
                min_size=0, max_size=120))
def test_in_budget_sequences_always_pack(heights):
    """Any sequence with total area <= 3/8 is fully placed, and the
    resulting packing passes every audit."""
    heights = in_budget_heights(heights)
    p = Packer()
    for h in heights:
        o = p.place(h)
        assert o.placed, f"h={h!r} rejected: {o.reason} {o.detail}"
    report = audit_all(p.snapshot())
    assert report.ok, "; ".join(report.lines())


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(min_value=0.001, max_value=0.125,
                          allow_nan=False), min_size=0, max_size=200))
def test_very_small_streams_always_pack(heights):
    heights = in_budget_heights(heights)
    p = Packer()
    for h in heights:
        assert p.place(h).placed
    assert audit_all(p.snapshot()).ok


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([0.251, 0.3076875, 0.25, 0.2, 0.126, 0.125,
                                 0.08875, 0.0576875, 0.5, 0.3333]),
                min_size=0, max_size=40))
def test_boundary_heavy_streams_always_pack(heights):
    heights = in_budget_heights(heights)
    p = Packer()
    for h in heights:
        assert p.place(h).placed
    assert audit_all(p.snapshot()).ok
