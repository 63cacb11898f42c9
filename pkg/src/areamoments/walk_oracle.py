"""Exact area histograms of closed walks on Z^2 with fixed step counts.

A walk in Gamma(n1, n2) makes n1 steps each of +1 and -1 (horizontal) and
n2 steps each of +2 and -2 (vertical), starting and ending at the origin.
Its algebraic area is the contour integral of x dy: a +2 step taken at
column x adds x, a -2 step subtracts x.  No path is ever stored, which is
what lets the dynamic program below scale.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .exactmath import factorial

DEFAULT_STATE_BUDGET = 2_000_000
BRUTEFORCE_MAX_LENGTH = 12

# step codes: horizontal +1/-1, vertical +2/-2
_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


class SizeError(ValueError):
    """Input exceeds a configured size guard."""


@dataclass(frozen=True)
class StepCounts:
    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError(f"step counts must be nonnegative, got {self.n1}, {self.n2}")

    @property
    def length(self) -> int:
        return 2 * (self.n1 + self.n2)

    def cardinal(self) -> int:
        return cardinal(self.n1, self.n2)


def cardinal(n1: int, n2: int) -> int:
    """Number of closed walks: (2(n1+n2))! / (n1!^2 n2!^2)."""
    return factorial(2 * (n1 + n2)) // (factorial(n1) ** 2 * factorial(n2) ** 2)


@dataclass(frozen=True)
class AreaDistribution:
    step_counts: StepCounts
    counts: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        # drop zero bins and freeze ordering
        clean = {a: c for a, c in sorted(self.counts.items()) if c}
        object.__setattr__(self, "counts", clean)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, AreaDistribution):
            return NotImplemented
        return self.step_counts == other.step_counts and dict(self.counts) == dict(other.counts)

    def histogram(self) -> list[tuple[int, int]]:
        return sorted(self.counts.items())

    def to_json_obj(self) -> dict:
        return {
            "n1": self.step_counts.n1,
            "n2": self.step_counts.n2,
            "histogram": [[a, str(c)] for a, c in self.histogram()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> AreaDistribution:
        sc = StepCounts(int(obj["n1"]), int(obj["n2"]))
        return cls(sc, {int(a): int(c) for a, c in obj["histogram"]})

    @classmethod
    def from_json(cls, text: str) -> AreaDistribution:
        return cls.from_json_obj(json.loads(text))


def _walks(remaining: list[int], x: int, area: int) -> Iterator[int]:
    # yields the area of every distinct ordering of the remaining steps
    if not any(remaining):
        yield area
        return
    for code, (dx, dy) in enumerate(_STEPS):
        if remaining[code]:
            remaining[code] -= 1
            yield from _walks(remaining, x + dx, area + dy * x)
            remaining[code] += 1


def enumerate_bruteforce(sc: StepCounts) -> AreaDistribution:
    """Histogram by visiting every step sequence.  Length is capped at 12."""
    if sc.length > BRUTEFORCE_MAX_LENGTH:
        raise SizeError(
            f"brute force limited to walk length {BRUTEFORCE_MAX_LENGTH}, got {sc.length}"
        )
    counts: dict[int, int] = {}
    for area in _walks([sc.n1, sc.n1, sc.n2, sc.n2], 0, 0):
        counts[area] = counts.get(area, 0) + 1
    return AreaDistribution(sc, counts)


def dp_state_estimate(sc: StepCounts) -> int:
    """Upper bound on DP table size: (n1+1)^2 (n2+1)^2 (2 n1 n2 + 1)."""
    return (sc.n1 + 1) ** 2 * (sc.n2 + 1) ** 2 * (2 * sc.n1 * sc.n2 + 1)


def enumerate_dp(sc: StepCounts, state_budget: int = DEFAULT_STATE_BUDGET) -> AreaDistribution:
    """Histogram by dynamic programming over (used steps, area).

    Layers are indexed by the number of steps taken; only the current layer
    is held in memory.
    """
    estimate = dp_state_estimate(sc)
    if estimate > state_budget:
        raise SizeError(
            f"DP state estimate (n1+1)^2*(n2+1)^2*(2*n1*n2+1) = {estimate} "
            f"exceeds state budget {state_budget} for (n1, n2) = ({sc.n1}, {sc.n2})"
        )
    n1, n2 = sc.n1, sc.n2
    # key: (used +1, used -1, used +2, used -2, area)
    layer: dict[tuple[int, int, int, int, int], int] = {(0, 0, 0, 0, 0): 1}
    for _ in range(sc.length):
        nxt: dict[tuple[int, int, int, int, int], int] = {}
        for (p1, m1, p2, m2, area), count in layer.items():
            x = p1 - m1
            if p1 < n1:
                key = (p1 + 1, m1, p2, m2, area)
                nxt[key] = nxt.get(key, 0) + count
            if m1 < n1:
                key = (p1, m1 + 1, p2, m2, area)
                nxt[key] = nxt.get(key, 0) + count
            if p2 < n2:
                key = (p1, m1, p2 + 1, m2, area + x)
                nxt[key] = nxt.get(key, 0) + count
            if m2 < n2:
                key = (p1, m1, p2, m2 + 1, area - x)
                nxt[key] = nxt.get(key, 0) + count
        layer = nxt
    counts = {key[4]: c for key, c in layer.items()}
    return AreaDistribution(sc, counts)


def moment(dist: AreaDistribution, order: int) -> int:
    """Sum of count * area**order over the histogram."""
    if order < 0:
        raise ValueError(f"moment order must be nonnegative, got {order}")
    return sum(c * a**order for a, c in dist.counts.items())


def char_function(dist: AreaDistribution, phi: float) -> complex:
    """Sum over walks of exp(i * phi * area), in double precision."""
    if not math.isfinite(phi):
        raise ValueError(f"phi must be finite, got {phi}")
    return sum((float(c) * cmath.exp(1j * phi * a) for a, c in dist.counts.items()), 0j)
