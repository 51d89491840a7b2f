"""Fuzz campaigns: batches of generated sequences driven through
independent packers, with audits and replay support.

A campaign is reproducible from (distribution, base seed, budget): run
``i`` uses seed ``base_seed + i``. Failures therefore replay from the
summary alone. Campaigns can shard across worker processes; each worker
owns its packers, so there is no shared state.

Besides the final-state audits, every run checks the large-square
reservation after each placement while the cumulative area is at most
1/8: the p1/p2 frontier plus the largest still-possible square must not
cross the container edge.
"""

from __future__ import annotations

import math
import multiprocessing
import time
from dataclasses import dataclass, field

from .generators import SequenceSpec, adversary_strategies, generate
from .geometry import AREA_EPS
from .packer import PHASE_PAIR34, Packer
from .verifier import audit_all

_SAMPLE_CAP = 20


@dataclass
class CampaignResult:
    distribution: str
    budget: float
    runs: int = 0
    packed_runs: int = 0
    total_squares: int = 0
    failure_count: int = 0
    failures: list = field(default_factory=list)  # samples
    violation_count: int = 0
    violations: list = field(default_factory=list)  # samples
    reservation_prefixes: int = 0
    reservation_failures: list = field(default_factory=list)
    pair_close_runs: int = 0
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return (
            self.failure_count == 0
            and self.violation_count == 0
            and not self.reservation_failures
        )

    def summary(self) -> str:
        line = (
            f"dist={self.distribution} runs={self.runs} "
            f"packed={self.packed_runs} squares={self.total_squares} "
            f"pair_closes={self.pair_close_runs} "
            f"violations={self.violation_count} "
            f"failures={self.failure_count} elapsed={self.elapsed:.2f}s"
        )
        if self.failures:
            seeds = sorted({f["seed"] for f in self.failures})
            line += f" failing_seeds={seeds[:10]}"
        return line


def run_one(seed: int, distribution: str, budget: float = 0.375,
            audit: bool = True) -> dict:
    """Pack one generated sequence; returns a plain result record."""
    heights = generate(
        SequenceSpec(seed=seed, budget=budget, distribution=distribution)
    )
    packer = Packer(record_events=False)
    failures = []
    reservation_failures = []
    prefixes = 0
    in_reservation = True
    for index, h in enumerate(heights):
        outcome = packer.place(h)
        if not outcome.placed:
            failures.append(
                {
                    "seed": seed,
                    "index": index,
                    "height": h,
                    "reason": outcome.reason,
                    "detail": outcome.detail,
                }
            )
            break
        if in_reservation:
            area = packer.cumulative_area
            if area <= 0.125:
                prefixes += 1
                frontier = max(
                    packer.shelves["p1"].used, packer.shelves["p2"].used
                )
                if frontier + math.sqrt(0.375 - area) > 1.0 + AREA_EPS:
                    reservation_failures.append(
                        {"seed": seed, "index": index, "frontier": frontier,
                         "area": area}
                    )
            else:
                in_reservation = False
    violations = []
    if audit:
        report = audit_all(packer.snapshot())
        violations = [
            {"seed": seed, "rule": v.rule, "detail": v.detail}
            for v in report.violations
        ]
    return {
        "seed": seed,
        "squares": len(packer.placements),
        "failures": failures,
        "violations": violations,
        "reservation_prefixes": prefixes,
        "reservation_failures": reservation_failures,
        "pair_closed": packer.small_phase == PHASE_PAIR34,
    }


def _merge(result: CampaignResult, record: dict) -> None:
    result.runs += 1
    result.total_squares += record["squares"]
    if not record["failures"]:
        result.packed_runs += 1
    result.failure_count += len(record["failures"])
    for f in record["failures"]:
        if len(result.failures) < _SAMPLE_CAP:
            result.failures.append(f)
    result.violation_count += len(record["violations"])
    for v in record["violations"]:
        if len(result.violations) < _SAMPLE_CAP:
            result.violations.append(v)
    result.reservation_prefixes += record["reservation_prefixes"]
    result.reservation_failures.extend(
        record["reservation_failures"][: _SAMPLE_CAP]
    )
    if record["pair_closed"]:
        result.pair_close_runs += 1


def _chunk_worker(args) -> CampaignResult:
    first, count, distribution, budget, audit = args
    result = CampaignResult(distribution=distribution, budget=budget)
    for seed in range(first, first + count):
        _merge(result, run_one(seed, distribution, budget, audit))
    return result


def run_campaign(runs: int, *, distribution: str = "uniform",
                 base_seed: int = 1, budget: float = 0.375,
                 audit: bool = True, workers: int = 0) -> CampaignResult:
    """Run ``runs`` sequences with seeds base_seed .. base_seed+runs-1."""
    start = time.perf_counter()
    result = CampaignResult(distribution=distribution, budget=budget)
    if workers > 1 and runs >= workers:
        per = (runs + workers * 4 - 1) // (workers * 4)
        jobs = []
        first = base_seed
        remaining = runs
        while remaining > 0:
            count = min(per, remaining)
            jobs.append((first, count, distribution, budget, audit))
            first += count
            remaining -= count
        with multiprocessing.Pool(workers) as pool:
            for part in pool.imap_unordered(_chunk_worker, jobs):
                result.runs += part.runs
                result.packed_runs += part.packed_runs
                result.total_squares += part.total_squares
                result.failure_count += part.failure_count
                result.failures.extend(
                    part.failures[: max(0, _SAMPLE_CAP - len(result.failures))]
                )
                result.violation_count += part.violation_count
                result.violations.extend(
                    part.violations[: max(0, _SAMPLE_CAP - len(result.violations))]
                )
                result.reservation_prefixes += part.reservation_prefixes
                result.reservation_failures.extend(
                    part.reservation_failures[
                        : max(0, _SAMPLE_CAP - len(result.reservation_failures))
                    ]
                )
                result.pair_close_runs += part.pair_close_runs
    else:
        for seed in range(base_seed, base_seed + runs):
            _merge(result, run_one(seed, distribution, budget, audit))
    result.elapsed = time.perf_counter() - start
    return result


def run_adversary(name: str, *, seed: int = 0, budget: float = 0.375,
                  max_steps: int = 500):
    """Drive one named adversary against a fresh packer.

    Returns (packer, steps) where steps is a list of (height, outcome).
    The adversary sees the full snapshot before every move and returns
    None to stop.
    """
    strategy = adversary_strategies()[name](seed)
    packer = Packer(budget=budget)
    steps = []
    while len(steps) < max_steps:
        h = strategy.next(packer.snapshot())
        if h is None:
            break
        steps.append((h, packer.place(h)))
    return packer, steps
