"""Input-sequence generators: seeded random distributions and scripted
adversaries that watch the board.

Reproducibility contract: sequences are a pure function of the seed.
The generator is xorshift64* (shifts 12/25/27, multiplier
0x2545F4914F6CDD1D) with the seed scrambled once through the splitmix64
finalizer, so nearby seeds diverge immediately. Doubles take the top 53
bits of the output. Both algorithms are fixed-width 64-bit integer
recipes, so any language can replay a failure from its seed alone.

Budget handling: generation stops at the first draw that would push
``sum(h^2)`` past the budget (the draw is discarded, not clipped), so
the emitted heights always satisfy the budget exactly as summed in
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import AREA_EPS
from .sizeclasses import subclass_params

_MASK64 = (1 << 64) - 1
_XORSHIFT_MULT = 0x2545F4914F6CDD1D
_TWO_NEG53 = 2.0 ** -53

DISTRIBUTIONS = (
    "uniform",
    "class_boundary",
    "medium_heavy",
    "very_small_heavy",
    "mixed",
    "scripted",
)


def _scramble(seed: int) -> int:
    """splitmix64 finalizer; maps any 64-bit seed to a well-mixed state."""
    z = (seed + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class Xorshift64Star:
    """Deterministic 64-bit generator; identical output on every platform."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = _scramble(seed & _MASK64) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _MASK64
        x ^= x >> 27
        self.state = x
        return (x * _XORSHIFT_MULT) & _MASK64

    def next_double(self) -> float:
        """Uniform in [0, 1), 53 bits of precision."""
        return (self.next_u64() >> 11) * _TWO_NEG53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.next_double()

    def randint(self, n: int) -> int:
        """Uniform in [0, n); modulo bias is negligible for small n."""
        return self.next_u64() % n


@dataclass(frozen=True)
class SequenceSpec:
    """Recipe for one input sequence."""

    seed: int = 0
    budget: float = 0.375
    distribution: str = "uniform"
    max_squares: int = 300
    heights: tuple = ()  # only for distribution="scripted"


def _boundary_probes() -> list[tuple[float, float]]:
    """(base, sign) pairs: class-interval edges to probe from inside.

    sign -1 sits just under an upper edge, +1 just above a lower edge;
    (0.5, +1) probes the just-large corner case.
    """
    probes = [(0.5, -1.0), (0.5, 1.0), (0.25, 1.0)]
    for k in range(0, 8):
        params = subclass_params(k)
        probes.append((params.h, -1.0))
        probes.append((params.min_height, 1.0))
    return probes


_PROBES = _boundary_probes()


def _draw(distribution: str, rng: Xorshift64Star) -> float:
    if distribution == "uniform":
        return rng.uniform(0.01, 0.52)
    if distribution == "class_boundary":
        base, sign = _PROBES[rng.randint(len(_PROBES))]
        delta = rng.uniform(1e-6, 1e-2)
        return base * (1.0 + sign * delta)
    if distribution == "medium_heavy":
        if rng.next_double() < 0.8:
            return rng.uniform(0.2501, 0.5)
        return rng.uniform(0.05, 0.25)
    if distribution == "very_small_heavy":
        if rng.next_double() < 0.9:
            return rng.uniform(0.005, 0.125)
        return rng.uniform(0.1251, 0.3)
    if distribution == "mixed":
        pick = rng.randint(4)
        if pick == 0:
            return rng.uniform(0.01, 0.52)
        if pick == 1:
            base, sign = _PROBES[rng.randint(len(_PROBES))]
            return base * (1.0 + sign * rng.uniform(1e-6, 1e-2))
        if pick == 2:
            return rng.uniform(0.2501, 0.5)
        return rng.uniform(0.005, 0.125)
    raise ValueError(f"unknown distribution {distribution!r}")


def generate(spec: SequenceSpec) -> list[float]:
    """Materialize the sequence described by ``spec``.

    Deterministic given the seed; the running area never exceeds the
    budget (first overflowing draw stops generation).
    """
    if spec.budget > 0.5 + AREA_EPS:
        raise ValueError(f"budget {spec.budget} above the supported 0.5")
    if spec.distribution == "scripted":
        total = 0.0
        for h in spec.heights:
            if not 0.0 < h <= 1.0:
                raise ValueError(f"scripted height {h} outside (0, 1]")
            total += h * h
        if total > spec.budget + AREA_EPS:
            raise ValueError(
                f"scripted area {total:.12g} exceeds budget {spec.budget:.12g}"
            )
        return list(spec.heights)
    if spec.distribution not in DISTRIBUTIONS:
        raise ValueError(f"unknown distribution {spec.distribution!r}")
    rng = Xorshift64Star(spec.seed)
    out: list[float] = []
    total = 0.0
    while len(out) < spec.max_squares:
        h = _draw(spec.distribution, rng)
        if total + h * h > spec.budget:
            break
        out.append(h)
        total += h * h
    return out


# ----------------------------------------------------------------------
# adversaries: stateful strategies that watch snapshots


class MediumCloser:
    """Feeds mediums that shave the floor row, then attacks the ceiling.

    Sides shrink with the remaining budget, so the run pushes the
    right-to-left frontier as far as the area bound allows.
    """

    def __init__(self, seed: int = 0) -> None:
        self.rng = Xorshift64Star(seed)

    def next(self, snapshot: dict) -> float | None:
        remaining = 0.375 - snapshot["cumulative_area"]
        cap = 0.30 + 0.05 * self.rng.next_double()
        h = min(cap, math.sqrt(max(remaining, 0.0)) - 1e-9)
        if h <= 0.2501:
            return None
        return h


class PairCloser:
    """Closes b0 quickly, then grinds p1/p2 shut with just-over-1/8 smalls."""

    def __init__(self, seed: int = 0) -> None:
        del seed  # fully scripted; kept for the uniform factory signature

    def next(self, snapshot: dict) -> float | None:
        remaining = 0.375 - snapshot["cumulative_area"]
        h = 0.24 if snapshot["small_phase"] == "buffer_b0" else 0.126
        return h if h * h <= remaining else None


class ColumnChurner:
    """Stacks near-maximal very smalls so columns fill and churn fast."""

    def __init__(self, seed: int = 0) -> None:
        self.rng = Xorshift64Star(seed)

    def next(self, snapshot: dict) -> float | None:
        remaining = 0.375 - snapshot["cumulative_area"]
        k = 1 + self.rng.randint(4)
        h = subclass_params(k).h * 0.999
        if h * h > remaining:
            h = subclass_params(4).h * 0.999
            if h * h > remaining:
                return None
        return h


class LargeLate:
    """Banks small squares to just under 1/8 area, then fires the
    largest square the budget still allows at the reserved corner."""

    def __init__(self, seed: int = 0) -> None:
        self.rng = Xorshift64Star(seed)
        self.fired = False

    def next(self, snapshot: dict) -> float | None:
        if self.fired:
            return None
        area = snapshot["cumulative_area"]
        if area >= 0.118:
            self.fired = True
            return math.sqrt(0.375 - area) - 1e-6
        return self.rng.uniform(0.05, 0.08)


def adversary_strategies() -> dict[str, type]:
    """Named adversary factories; instantiate with an optional seed."""
    return {
        "medium_closer": MediumCloser,
        "pair_closer": PairCloser,
        "column_churner": ColumnChurner,
        "large_late": LargeLate,
    }
