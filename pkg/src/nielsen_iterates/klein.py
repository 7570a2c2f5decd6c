"""Klein bottle pairs through the closed-form Nielsen number.

A fibre-preserving self-map of the Klein bottle is recorded as (q, r):
degree q on the fibre and r on the base.  It is well defined when r is odd,
or when r is even and q = 0.  Reidemeister sets are non-abelian here, so
only the formula route is offered; the hypotheses it needs (coprime
fibre and base degrees) are treated as gates.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import PreconditionError
from .invariants import divisors, mobius_sum

# value printed for N at level 3 of the pair (2,3),(3,5); the formula gives 2646
PRINTED_N3_WORKED_PAIR = 266


def _check_map(name: str, q: int, r: int) -> None:
    if r % 2 == 0 and q != 0:
        raise ValueError(
            f"map {name} = ({q},{r}) is not well defined: an even base degree needs fibre degree 0"
        )


@dataclass(frozen=True)
class KleinPair:
    f: tuple[int, int]  # (a, c)
    g: tuple[int, int]  # (b, d)

    def __post_init__(self):
        _check_map("f", *self.f)
        _check_map("g", *self.g)

    @property
    def fibre_coprime(self) -> bool:
        return gcd(self.f[0], self.g[0]) == 1

    @property
    def base_coprime(self) -> bool:
        return gcd(self.f[1], self.g[1]) == 1


def klein_nielsen(p: KleinPair, n: int) -> int:
    """(|c^n - d^n| / 2) (|a^n + b^n| + |a^n - b^n|)."""
    if n < 1:
        raise ValueError(f"levels start at 1, got {n}")
    (a, c), (b, d) = p.f, p.g
    base = abs(c**n - d**n)
    if base % 2:
        raise ArithmeticError(f"|c^{n} - d^{n}| = {base} is odd; the halving is not integral")
    return base // 2 * (abs(a**n + b**n) + abs(a**n - b**n))


def _gate(p: KleinPair, what: str, level: int) -> None:
    failures = []
    if not p.fibre_coprime:
        failures.append(f"gcd(a, b) = {gcd(p.f[0], p.g[0])} != 1")
    if not p.base_coprime:
        failures.append(f"gcd(c, d) = {gcd(p.f[1], p.g[1])} != 1")
    if not failures and klein_nielsen(p, level) == 0:
        failures.append(f"N at level {level} is 0")
    if failures:
        raise PreconditionError(what, failures)


def klein_np(p: KleinPair, m: int) -> int:
    _gate(p, f"Klein NP_{m}", m)
    return mobius_sum(lambda k: klein_nielsen(p, k), m)


def klein_nphi(p: KleinPair, n: int) -> int:
    _gate(p, f"Klein NPhi_{n}", n)
    value = klein_nielsen(p, n)
    total = sum(klein_np(p, m) for m in divisors(n))
    if total != value:
        raise ArithmeticError(f"sum of NP over divisors of {n} is {total}, expected {value}")
    return value
