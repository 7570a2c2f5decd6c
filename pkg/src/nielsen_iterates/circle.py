"""Circle pairs: maps of S^1 with degrees a (for f) and b (for g).

Everything is a 1x1 instance of the torus machinery, but boosts are plain
integers here and the gcd criterion has a closed form.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import InfiniteReidemeisterError, LevelError
from .invariants import LevelReport, level_reports
from .reidemeister import TorusPair, boost_class, boost_map, preimage_classes, reid_set


@dataclass(frozen=True)
class CirclePair:
    a: int
    b: int

    def torus(self) -> TorusPair:
        return TorusPair.circle(self.a, self.b)


def circle_reid_order(p: CirclePair, n: int) -> int | None:
    """|b^n - a^n|, or None when the level is degenerate (infinite set)."""
    if n < 1:
        raise LevelError(f"levels start at 1, got {n}")
    return abs(p.b**n - p.a**n) or None


def circle_iota(p: CirclePair, m: int, n: int) -> int:
    """The boost m -> n as an integer multiplier (no absolute value taken)."""
    if m < 1 or n % m:
        raise LevelError(f"{m} does not divide {n}")
    return sum(p.b ** (n - (l + 1) * m) * p.a ** (l * m) for l in range(n // m))


def circle_gcd_reducible(p: CirclePair) -> bool:
    return gcd(p.a, p.b) == 1


@dataclass(frozen=True)
class EquivalentConditions:
    """The three equivalent conditions for levels k, m with n = km coprime."""

    common_boosts_reduce: bool
    lcm_condition: bool
    gcd_condition: bool

    @property
    def consistent(self) -> bool:
        return self.common_boosts_reduce == self.lcm_condition == self.gcd_condition


def _lcm(x: int, y: int) -> int:
    return abs(x * y) // gcd(x, y) if x and y else 0


def lemma_equivalent_check(p: CirclePair, k: int, m: int) -> EquivalentConditions:
    """Evaluate each condition independently.

    The first is decided by searching preimages: every level-k class whose
    boost to n also comes from level m must come from level 1.
    """
    if k < 1 or m < 1 or gcd(k, m) != 1:
        raise LevelError(f"levels {k} and {m} must be coprime")
    n = k * m
    for level in (k, m, n):
        if circle_reid_order(p, level) is None:
            raise InfiniteReidemeisterError(f"level {level} is degenerate for {p}")
    pair = p.torus()
    target = reid_set(pair, n)
    B_k = boost_map(pair, k, n)
    reduce_ok = True
    for beta in reid_set(pair, k).classes():
        alpha = boost_class(B_k, beta, target)
        if preimage_classes(boost_map(pair, m, n), alpha, reid_set(pair, m)):
            if not preimage_classes(boost_map(pair, 1, n), alpha, reid_set(pair, 1)):
                reduce_ok = False
                break
    lcm_ok = _lcm(circle_iota(p, m, n), circle_iota(p, k, n)) == abs(circle_iota(p, 1, n))
    gcd_ok = gcd(circle_iota(p, 1, k), circle_iota(p, 1, m)) == 1
    return EquivalentConditions(reduce_ok, lcm_ok, gcd_ok)


def circle_report(p: CirclePair, n: int) -> list[LevelReport]:
    verdict = circle_gcd_reducible(p)
    return level_reports(p.torus(), n, gcd_verdict=lambda m: verdict)
