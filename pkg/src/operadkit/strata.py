"""Fox-Neuwirth strata of configurations with exact rational coordinates.

A configuration of k labeled points in R^n determines an n-ordinal on the
labels: compare two points lexicographically and record how many leading
coordinates agree.  Strata are classified, sampled, and cross-validated
against the labeled-ordinal poset by walking straight segments between
sample points.  All arithmetic is exact; there are no tolerances.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    DimensionMismatch,
    EqualPoints,
    OutOfRange,
    ResourceLimit,
)
from .ordinals import NOrdinal, count_ordinals, from_relations, ordinal_from_json


def _rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise OutOfRange("coordinates must be integers or 'p/q' strings", got=repr(value))


@dataclass(frozen=True)
class Configuration:
    """k labeled points in R^n, pairwise distinct."""

    dim: int
    points: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.dim < 0:
            raise OutOfRange("dimension must be non-negative", dim=self.dim)
        pts = tuple(tuple(_rat(c) for c in p) for p in self.points)
        object.__setattr__(self, "points", pts)
        for i, p in enumerate(pts):
            if len(p) != self.dim:
                raise DimensionMismatch(
                    "point length disagrees with the ambient dimension",
                    point=i,
                    expected=self.dim,
                    got=len(p),
                )
        for i, j in itertools.combinations(range(len(pts)), 2):
            if pts[i] == pts[j]:
                raise EqualPoints("points must be pairwise distinct", pair=[i, j])

    @property
    def arity(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "points": [[str(c) for c in p] for p in self.points],
        }


def configuration_from_json(obj: dict) -> Configuration:
    if not isinstance(obj, dict) or "dim" not in obj or "points" not in obj:
        raise OutOfRange("configuration needs 'dim' and 'points' fields", got=obj)
    return Configuration(obj["dim"], tuple(tuple(p) for p in obj["points"]))


@dataclass(frozen=True)
class StratumLabel:
    """A labeled n-ordinal: the shape in sorted order plus the permutation
    listing which point label sits at each sorted position."""

    ordinal: NOrdinal
    labels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.ordinal.domain.is_infinite:
            raise OutOfRange("strata live over a finite level domain")
        if sorted(self.labels) != list(range(self.ordinal.arity)):
            raise OutOfRange(
                "labels must permute the positions",
                labels=list(self.labels),
                arity=self.ordinal.arity,
            )

    def to_json(self) -> dict:
        return {"ordinal": self.ordinal.to_json(), "labels": list(self.labels)}


def stratum_from_json(obj: dict) -> StratumLabel:
    if not isinstance(obj, dict) or "ordinal" not in obj or "labels" not in obj:
        raise OutOfRange("stratum needs 'ordinal' and 'labels' fields", got=obj)
    return StratumLabel(ordinal_from_json(obj["ordinal"]), tuple(obj["labels"]))


def direction_class(x: Sequence, y: Sequence) -> tuple[int, int]:
    """First coordinate where two points differ, with the sign of y - x
    there.  The count of leading equal coordinates is the relation level."""
    x = tuple(_rat(c) for c in x)
    y = tuple(_rat(c) for c in y)
    if len(x) != len(y):
        raise DimensionMismatch(
            "points live in different dimensions", left=len(x), right=len(y)
        )
    for p, (a, b) in enumerate(zip(x, y)):
        if a != b:
            return p, (1 if b > a else -1)
    raise EqualPoints("direction class of a point with itself", point=[str(c) for c in x])


def classify_stratum(c: Configuration) -> StratumLabel:
    """The labeled n-ordinal whose stratum contains the configuration.

    Builds the full pairwise relation table and runs it through the axiom
    validator, so a violation of the ordinal axioms (impossible for exact
    lexicographic comparison) would surface loudly.
    """
    k = c.arity
    table = {}
    for i, j in itertools.combinations(range(k), 2):
        p, sign = direction_class(c.points[i], c.points[j])
        if sign > 0:
            table[(i, j)] = p
        else:
            table[(j, i)] = p
    ordinal, order = from_relations(c.dim, range(k), table)
    return StratumLabel(ordinal, tuple(order))


def sample_stratum(label: StratumLabel, spread=1) -> Configuration:
    """A deterministic interior point of the stratum.

    Position r of the sorted order gets coordinate j equal to spread times
    the number of earlier separations at level <= j, so consecutive points
    first differ exactly at their relation level.
    """
    spread = _rat(spread)
    if spread <= 0:
        raise OutOfRange("spread must be positive", spread=str(spread))
    t = label.ordinal
    n = t.domain.n
    k = t.arity
    placed = [None] * k
    for r, lab in enumerate(label.labels):
        coords = tuple(
            spread * sum(1 for e in range(r) if t.levels[e] <= j) for j in range(n)
        )
        placed[lab] = coords
    return Configuration(n, tuple(placed))


@dataclass
class PartitionReport:
    n: int
    k: int
    trials: int
    universe: int
    observed: int
    tally: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "trials": self.trials,
            "universe": self.universe,
            "observed": self.observed,
            "tally": dict(sorted(self.tally.items())),
        }


def label_key(label: StratumLabel) -> str:
    return f"{list(label.ordinal.levels)}|{list(label.labels)}"


def random_configuration(rng, n: int, k: int, max_attempts: int = 1000) -> Configuration:
    """Uniform points on a small integer grid, rejecting coincidences.

    The grid is kept coarse on purpose: ties in leading coordinates are
    what populate the deeper strata.
    """
    for _ in range(max_attempts):
        pts = tuple(
            tuple(Fraction(rng.randint(0, k)) for _ in range(n)) for _ in range(k)
        )
        if len(set(pts)) == k:
            return Configuration(n, pts)
    raise ResourceLimit(
        "could not draw pairwise distinct points", attempts=max_attempts, n=n, k=k
    )


def verify_partition(n: int, k: int, trials: int, seed: int = 0) -> PartitionReport:
    """Classify seeded random configurations and tally the strata seen.

    Every draw lands in exactly one stratum; the tally is measured against
    the full label universe of size n^(k-1) * k!.
    """
    if n < 1 or k < 0 or trials < 0:
        raise OutOfRange("need n >= 1, k >= 0, trials >= 0", n=n, k=k, trials=trials)
    universe = count_ordinals(n, k) * math.factorial(k)
    tally: dict[str, int] = {}
    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        config = random_configuration(rng, n, k)
        key = label_key(classify_stratum(config))
        tally[key] = tally.get(key, 0) + 1
    return PartitionReport(n, k, trials, universe, len(tally), tally)


def degeneration_check(
    upper: StratumLabel, lower: StratumLabel, steps: int = 8
) -> bool:
    """Numeric evidence that the lower stratum lies in the closure of the
    upper one: walk the straight segment from a lower sample point to an
    upper sample point and classify at t = 1, 1/2, 1/4, ...

    Every sampled t must classify to the upper label.  This is a falsifier
    on convex cells, not a proof; it returns False as soon as the segment
    leaves the upper stratum or two points collide along the way.
    """
    if (
        upper.ordinal.domain != lower.ordinal.domain
        or upper.ordinal.arity != lower.ordinal.arity
    ):
        raise DimensionMismatch(
            "strata must share the dimension and the number of points",
            upper=upper.to_json(),
            lower=lower.to_json(),
        )
    if upper == lower:
        return False
    low = sample_stratum(lower)
    high = sample_stratum(upper)
    if classify_stratum(low) != lower:
        return False
    t = Fraction(1)
    for _ in range(max(1, steps)):
        pts = tuple(
            tuple(a + t * (b - a) for a, b in zip(p, q))
            for p, q in zip(low.points, high.points)
        )
        try:
            moved = Configuration(low.dim, pts)
        except EqualPoints:
            return False
        if classify_stratum(moved) != upper:
            return False
        t /= 2
    return True
