# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled geometric kernels: collision and containment scans over the
parallel coordinate arrays (x, y, side) of placed squares.

Semantics must match the pure-Python fallback bit for bit; the test
suite cross-checks both backends on random inputs.
"""


def first_collision(double[::1] xs, double[::1] ys, double[::1] ss,
                    Py_ssize_t n, double cx, double cy, double cw, double ch,
                    double eps):
    cdef Py_ssize_t i
    cdef double x, y, s, ox, oy
    cdef double cx2 = cx + cw
    cdef double cy2 = cy + ch
    for i in range(n):
        x = xs[i]
        y = ys[i]
        s = ss[i]
        ox = (cx2 if cx2 < x + s else x + s) - (cx if cx > x else x)
        if ox <= eps:
            continue
        oy = (cy2 if cy2 < y + s else y + s) - (cy if cy > y else y)
        if oy > eps:
            return i
    return -1


def first_overlap_pair(double[::1] xs, double[::1] ys, double[::1] ss,
                       Py_ssize_t n, double eps):
    cdef Py_ssize_t i, j
    cdef double xi, yi, si, xi2, yi2, xj, yj, sj, ox, oy
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
            ox = (xi2 if xi2 < xj + sj else xj + sj) - (xi if xi > xj else xj)
            if ox <= eps:
                continue
            oy = (yi2 if yi2 < yj + sj else yj + sj) - (yi if yi > yj else yj)
            if oy > eps:
                return i, j
    return -1, -1


def first_outside_unit(double[::1] xs, double[::1] ys, double[::1] ss,
                       Py_ssize_t n, double eps):
    cdef Py_ssize_t i
    cdef double x, y, s
    for i in range(n):
        x = xs[i]
        y = ys[i]
        s = ss[i]
        if x < -eps or y < -eps or x + s > 1.0 + eps or y + s > 1.0 + eps:
            return i
    return -1
