"""Benchmark the kernel backends against each other.

Two workloads dominated by the hot kernels: packing a long very-small
sequence (one collision scan per placement) and the all-pairs geometry
audit of the resulting snapshot. Each is timed per backend with the
best of ``repeat`` runs.
"""

from __future__ import annotations

import time

from . import kernels
from .packer import Packer
from .sizeclasses import subclass_params
from .verifier import audit_geometry


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _workload(squares: int) -> list[float]:
    """Dense very-small sequence: the most placements the budget allows."""
    side = subclass_params(5).h * 0.999
    count = min(squares, int(0.3745 / (side * side)))
    return [side] * count


def run_bench(squares: int = 300, repeat: int = 5) -> list[dict]:
    """Time every available backend; returns one row per backend."""
    heights = _workload(squares)

    def pack_once():
        packer = Packer(record_events=False)
        for h in heights:
            packer.place(h)
        return packer

    snapshot = pack_once().snapshot()
    saved = kernels.active()
    rows = []
    try:
        for name in kernels.available():
            kernels.use(name)
            rows.append(
                {
                    "backend": name,
                    "squares": len(heights),
                    "pack_s": _best(pack_once, repeat),
                    "audit_s": _best(lambda: audit_geometry(snapshot), repeat),
                }
            )
    finally:
        kernels.use(saved)
    return rows


def format_rows(rows: list[dict]) -> str:
    lines = [f"{'backend':<10} {'squares':>8} {'pack':>12} {'audit':>12}"]
    for row in rows:
        lines.append(
            f"{row['backend']:<10} {row['squares']:>8} "
            f"{row['pack_s'] * 1e3:>10.2f}ms {row['audit_s'] * 1e3:>10.2f}ms"
        )
    if len(rows) == 2:
        by = {r["backend"]: r for r in rows}
        if "python" in by and "compiled" in by:
            pack_x = by["python"]["pack_s"] / max(by["compiled"]["pack_s"], 1e-12)
            audit_x = by["python"]["audit_s"] / max(by["compiled"]["audit_s"], 1e-12)
            lines.append(
                f"compiled speedup: pack x{pack_x:.1f}, audit x{audit_x:.1f}"
            )
    return "\n".join(lines)
