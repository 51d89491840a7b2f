"""Pure-Python fallback for the hot geometric kernels.

Mirrors the compiled extension exactly: same signatures, same argument
conventions (parallel coordinate arrays of placed squares: x, y, side),
same return values. Overlap means the interiors intersect deeper than
``eps`` along both axes; flush shared edges do not count.
"""

from __future__ import annotations


def first_collision(xs, ys, ss, n, cx, cy, cw, ch, eps):
    """Index of the first placed square whose interior overlaps the
    candidate rect (cx, cy, cw, ch) by more than eps on both axes, or -1.
    """
    cx2 = cx + cw
    cy2 = cy + ch
    for i in range(n):
        x = xs[i]
        y = ys[i]
        s = ss[i]
        if (
            min(cx2, x + s) - max(cx, x) > eps
            and min(cy2, y + s) - max(cy, y) > eps
        ):
            return i
    return -1


def first_overlap_pair(xs, ys, ss, n, eps):
    """First pair (i, j), i < j, of placed squares with interiors
    overlapping by more than eps on both axes, or (-1, -1).
    """
    for i in range(n):
        xi = xs[i]
        yi = ys[i]
        si = ss[i]
        xi2 = xi + si
        yi2 = yi + si
        for j in range(i + 1, n):
            xj = xs[j]
            yj = ys[j]
            sj = ss[j]
            if (
                min(xi2, xj + sj) - max(xi, xj) > eps
                and min(yi2, yj + sj) - max(yi, yj) > eps
            ):
                return i, j
    return -1, -1


def first_outside_unit(xs, ys, ss, n, eps):
    """Index of the first placed square not contained in the unit square
    within tolerance eps, or -1.
    """
    for i in range(n):
        x = xs[i]
        y = ys[i]
        s = ss[i]
        if x < -eps or y < -eps or x + s > 1.0 + eps or y + s > 1.0 + eps:
            return i
    return -1
