"""Size classes of input squares and their shelf constants.

Squares are divided by height into large (> 1/2), medium (in (1/4, 1/2])
and a geometric ladder of subclasses covering (0, 1/4]: subclass 0 is
the small class (1/8, 1/4], and subclass k >= 1 holds the very-small
squares in (h_k * r_k, h_k], where h_k = h_{k-1} * r_{k-1}.

The ratio schedule is r_0 = 0.5, r_1 = 0.71, r_2 = 0.65 and 0.58 for
every later subclass. Heights are computed once, by repeated
multiplication in a fixed order, and memoized so that interval
endpoints are bitwise identical everywhere they are used; this is what
makes boundary classification deterministic in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

RATIO_0 = 0.5
RATIO_1 = 0.71
RATIO_2 = 0.65
RATIO_TAIL = 0.58

#: Heights below this are indistinguishable from zero at double
#: precision; classify refuses them instead of iterating forever.
MIN_CLASSIFIABLE_HEIGHT = 1e-15


class ConstantsError(Exception):
    """Raised when the ratio schedule fails its density sanity checks."""


@dataclass(frozen=True)
class SizeClass:
    """Tagged size class: 'large', 'medium', or subclass ('sub', k)."""

    kind: str
    k: int = -1

    @property
    def is_large(self) -> bool:
        return self.kind == "large"

    @property
    def is_medium(self) -> bool:
        return self.kind == "medium"

    @property
    def is_small(self) -> bool:
        return self.kind == "sub" and self.k == 0

    @property
    def is_very_small(self) -> bool:
        return self.kind == "sub" and self.k >= 1

    @property
    def label(self) -> str:
        if self.kind == "sub":
            return "small" if self.k == 0 else f"sub{self.k}"
        return self.kind


LARGE = SizeClass("large")
MEDIUM = SizeClass("medium")


def sub(k: int) -> SizeClass:
    if k < 0:
        raise ValueError(f"subclass index must be >= 0, got {k}")
    return SizeClass("sub", k)


def parse_label(label: str) -> SizeClass:
    """Inverse of SizeClass.label, for deserialization."""
    if label == "large":
        return LARGE
    if label == "medium":
        return MEDIUM
    if label == "small":
        return sub(0)
    if label.startswith("sub"):
        return sub(int(label[3:]))
    raise ValueError(f"unknown size class label: {label!r}")


@dataclass(frozen=True)
class ClassParams:
    """Shelf constants for subclass ``k``.

    ``h`` is the maximum admissible height, ``r`` the packing ratio and
    ``min_height`` = h * r the (exclusive) lower bound of the class.
    """

    k: int
    h: float
    r: float
    min_height: float


def ratio(k: int) -> float:
    if k < 0:
        raise ValueError(f"subclass index must be >= 0, got {k}")
    if k == 0:
        return RATIO_0
    if k == 1:
        return RATIO_1
    if k == 2:
        return RATIO_2
    return RATIO_TAIL


_params: list[ClassParams] = [ClassParams(0, 0.25, RATIO_0, 0.25 * RATIO_0)]


def subclass_params(k: int) -> ClassParams:
    """Constants (h_k, r_k, h_k * r_k) for subclass ``k``.

    Heights shrink geometrically, so k is unbounded; the table grows on
    demand and every entry is derived from the previous one in a fixed
    multiplication order.
    """
    if k < 0:
        raise ValueError(f"subclass index must be >= 0, got {k}")
    while len(_params) <= k:
        prev = _params[-1]
        h = prev.min_height  # h_k = h_{k-1} * r_{k-1}, already computed
        r = ratio(len(_params))
        _params.append(ClassParams(len(_params), h, r, h * r))
    return _params[k]


def classify(height: float) -> SizeClass:
    """Map a height in (0, 1] to its unique size class.

    Intervals are half-open (lower, upper]; an exact boundary height
    belongs to the class whose upper bound it equals.
    """
    if not (height > 0.0) or height > 1.0 or math.isnan(height):
        raise ValueError(f"height must be in (0, 1], got {height}")
    if height > 0.5:
        return LARGE
    if height > 0.25:
        return MEDIUM
    if height < MIN_CLASSIFIABLE_HEIGHT:
        raise ValueError(f"height {height} below classifiable range")
    k = 0
    while height <= subclass_params(k).min_height:
        k += 1
    return sub(k)


def validate_ratios(max_k: int = 8) -> list[tuple[int, float]]:
    """Density margins guaranteeing closed columns pack above 1/2.

    For subclass 1, columns have length exactly twice their height, so a
    closed column holds exactly two squares and its density is at least
    r_1 squared; the margin is r_1**2 - 1/2. For k >= 2 the margin is
    (r_k - h_k * r_k**2 / 0.25) - 1/2. Every margin must be strictly
    positive or the constants are unusable.
    """
    margins: list[tuple[int, float]] = []
    for k in range(1, max_k + 1):
        p = subclass_params(k)
        if k == 1:
            if p.r < math.sqrt(0.5):
                raise ConstantsError(f"r_1 = {p.r} below sqrt(1/2)")
            margin = p.r * p.r - 0.5
        else:
            margin = (p.r - p.h * p.r * p.r / 0.25) - 0.5
        if margin <= 0.0:
            raise ConstantsError(f"density margin for subclass {k} is {margin}")
        margins.append((k, margin))
    return margins


def buffer_span(which: str) -> float:
    """Horizontal extent of a buffer group in the upper-left corner.

    ``b0_b3_row`` is the row-3 group: the subclass-3 column plus the
    small buffer, h_3 + 1/4. ``b1_b2_b4plus_row`` is the row-4 group:
    the subclass-1 and -2 columns plus the closed form of the geometric
    series of all later column widths, h_1 + h_2 + h_4 / (1 - 0.58).
    """
    if which == "b0_b3_row":
        return subclass_params(3).h + 0.25
    if which == "b1_b2_b4plus_row":
        h1 = subclass_params(1).h
        h2 = subclass_params(2).h
        h4 = subclass_params(4).h
        return h1 + h2 + h4 / (1.0 - RATIO_TAIL)
    raise ValueError(f"unknown buffer group: {which!r}")
