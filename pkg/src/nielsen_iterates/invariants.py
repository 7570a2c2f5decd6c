"""Nielsen-type counts of iterates for torus (and circle) pairs.

Three routes are kept separate on purpose:

* ``np_direct`` / ``nphi`` count irreducible classes through explicit
  lattice inclusion-exclusion over boost images.
* ``np_mobius`` / ``nphi_toral`` / ``nphi_tree`` are closed formulas in
  Nielsen numbers of iterates.  They are only valid under hypotheses
  (reducibility to the gcd, injectivity of boosts, nonzero N) that are
  checked here before any value is returned.
* ``gcd_reducible_check`` decides reducibility to the gcd by enumerating
  classes, which is what the formula route relies on.

On tori every Nielsen number is |det(G^n - F^n)| (zero when the
determinant vanishes), so essential classes are exactly all classes at
levels where the determinant is nonzero.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from math import gcd, prod
from typing import Callable

from sympy import divisors as _divisors
from sympy import primefactors

from .errors import (
    BudgetExceededError,
    InfiniteReidemeisterError,
    PreconditionError,
)
from .exactint import det, lattice_intersect, lattice_index, unimodular_inverse, mat_pow, IntMatrix
from .reidemeister import (
    TorusPair,
    boost_class,
    boost_map,
    image_subgroup,
    injective_on_boosts,
    reid_set,
)

DEFAULT_CLASS_BUDGET = 100_000

# flag names used in LevelReport
ESSENTIALLY_REDUCIBLE = "essentially_reducible"
INJECTIVE_BOOSTS = "injective_boosts"
GCD_REDUCIBLE = "gcd_reducible"
WEAKLY_JIANG_ASSUMED = "weakly_jiang_assumed"


@dataclass(frozen=True)
class DivisorLattice:
    n: int
    divisors: tuple[int, ...]
    primes: tuple[int, ...]
    maximal_proper: tuple[int, ...]


def divisor_lattice(n: int) -> DivisorLattice:
    if n < 1:
        raise ValueError(f"levels start at 1, got {n}")
    primes = tuple(primefactors(n))
    return DivisorLattice(
        n, tuple(_divisors(n)), primes, tuple(sorted(n // p for p in primes))
    )


def divisors(n: int) -> tuple[int, ...]:
    return divisor_lattice(n).divisors


@dataclass(frozen=True)
class LevelReport:
    m: int
    reid_order: int | None  # None: infinite (or not computed for non-abelian spaces)
    nielsen: int
    np: int | None  # None: not computed
    nphi: int | None
    flags: frozenset[str]


def mobius_sum(N: Callable[[int], int], m: int) -> int:
    """sum over subsets tau of the primes of m of (-1)^|tau| N(m / prod(tau))."""
    primes = divisor_lattice(m).primes
    total = 0
    for k in range(len(primes) + 1):
        for tau in combinations(primes, k):
            total += (-1) ** k * N(m // prod(tau))
    return total


def nielsen_number(pair: TorusPair, n: int) -> int:
    """|det(G^n - F^n)|."""
    return abs(det(pair.relation(n)))


def image_union_terms(pair: TorusPair, n: int) -> list[tuple[tuple[int, ...], int]]:
    """Inclusion-exclusion terms for the reducible classes at level n.

    One entry per nonempty set of maximal proper divisors, giving the order
    of the intersection of their boost images.  Only maximal divisors are
    needed: an image from any smaller level sits inside one of these by
    the composition law for boosts.
    """
    target = reid_set(pair, n)
    if target.order is None:
        raise InfiniteReidemeisterError(f"level {n} is degenerate (det A_n = 0)")
    levels = divisor_lattice(n).maximal_proper
    images = {m: image_subgroup(boost_map(pair, m, n), target) for m in levels}
    terms = []
    for k in range(1, len(levels) + 1):
        for subset in combinations(levels, k):
            L = images[subset[0]]
            for m in subset[1:]:
                L = lattice_intersect(L, images[m])
            terms.append((subset, target.order // lattice_index(L)))
    return terms


def np_direct(pair: TorusPair, n: int) -> int:
    """Irreducible essential classes at level n, counted through boost images."""
    if det(pair.relation(n)) == 0:
        return 0
    union = sum((-1) ** (len(s) + 1) * order for s, order in image_union_terms(pair, n))
    return reid_set(pair, n).order - union


def np_bounds(pair: TorusPair, n: int) -> tuple[int, int]:
    """(lower, upper) sandwich on NP_n from Nielsen numbers at n and n/p."""
    upper = nielsen_number(pair, n)
    lower = upper - sum(nielsen_number(pair, m) for m in divisor_lattice(n).maximal_proper)
    return max(lower, 0), upper


def essentially_reducible_check(pair: TorusPair, n: int) -> bool:
    """For all k | m | n, det A_m != 0 implies det A_k != 0."""
    dets = {m: det(pair.relation(m)) for m in divisors(n)}
    return all(dets[k] != 0 for m in dets if dets[m] for k in divisors(m))


def gcd_reducibility_failures(
    pair: TorusPair, n: int, budget: int = DEFAULT_CLASS_BUDGET
) -> list[tuple[int, int]]:
    """Level pairs (m, k) at which reduction to the gcd fails for some class at level n.

    For every pair of distinct proper divisors m, k of n, every class b at
    level m and c at level k boosting to the same level-n class must both
    come from one class at level gcd(m, k).  Classes are enumerated
    exhaustively, so every level dividing n must be finite.
    """
    pair.require_commuting()
    levels = divisors(n)
    for m in levels:
        if reid_set(pair, m).order is None:
            raise InfiniteReidemeisterError(f"level {m} of {n} has an infinite Reidemeister set")
    if reid_set(pair, n).order > budget:
        raise BudgetExceededError(f"|R_{n}| = {reid_set(pair, n).order} exceeds budget {budget}")

    target = reid_set(pair, n)
    boosted: dict[int, dict] = {}
    for m in levels[:-1]:
        by_image = defaultdict(list)
        B = boost_map(pair, m, n)
        for c in reid_set(pair, m).classes():
            by_image[boost_class(B, c, target)].append(c)
        boosted[m] = by_image

    failures = []
    for m, k in combinations(levels[:-1], 2):
        d = gcd(m, k)
        Bm, Bk = boost_map(pair, d, m), boost_map(pair, d, k)
        Sm, Sk = reid_set(pair, m), reid_set(pair, k)
        common = {
            (boost_class(Bm, c, Sm), boost_class(Bk, c, Sk)) for c in reid_set(pair, d).classes()
        }
        ok = all(
            (b, c) in common
            for alpha, bs in boosted[m].items()
            for b in bs
            for c in boosted[k].get(alpha, ())
        )
        if not ok:
            failures.append((m, k))
    return failures


def gcd_reducible_check(pair: TorusPair, n: int, budget: int = DEFAULT_CLASS_BUDGET) -> bool:
    """Brute-force verdict on reduction to the gcd for classes at level n."""
    return not gcd_reducibility_failures(pair, n, budget)


def _gcd_verdict(pair: TorusPair, m: int, budget: int) -> tuple[bool, str]:
    if abs(det(pair.G)) == 1:
        return True, "G is unimodular (commuting, injective, essentially reducible)"
    if pair.r == 1 and gcd(pair.F[0, 0], pair.G[0, 0]) == 1:
        return True, "circle degrees are coprime"
    try:
        bad = gcd_reducibility_failures(pair, m, budget)
    except (BudgetExceededError, InfiniteReidemeisterError) as exc:
        return False, f"gcd-reducibility at level {m} could not be verified ({exc})"
    if bad:
        levels = ", ".join(f"({a},{b})" for a, b in bad)
        return False, f"gcd-reducibility fails at levels {levels}"
    return True, f"class enumeration at level {m}"


def formula_hypotheses(
    pair: TorusPair, m: int, budget: int = DEFAULT_CLASS_BUDGET
) -> tuple[list[str], set[str]]:
    """Check the hypotheses under which NP_m is the Möbius sum of Nielsen numbers.

    Returns (failures, flags).  An empty failure list means the closed
    formulas may be used at level m.
    """
    failures: list[str] = []
    flags = {WEAKLY_JIANG_ASSUMED}
    if not pair.commuting:
        failures.append("commutativity fails: FG != GF, so boosts are not defined")
    if nielsen_number(pair, m) == 0:
        failures.append(f"N(f^{m}, g^{m}) = 0")
    if failures:
        return failures, flags
    if essentially_reducible_check(pair, m):
        flags.add(ESSENTIALLY_REDUCIBLE)
    else:
        failures.append(f"essential reducibility fails below level {m}")
    not_injective = [d for d in divisors(m) if not injective_on_boosts(pair, d, m)[0]]
    if not_injective:
        failures.append(f"boosts to level {m} not injective from levels {not_injective}")
    else:
        flags.add(INJECTIVE_BOOSTS)
    ok, why = _gcd_verdict(pair, m, budget)
    if ok:
        flags.add(GCD_REDUCIBLE)
    else:
        failures.append(why)
    return failures, flags


def np_mobius_formula(pair: TorusPair, m: int) -> int:
    """The Möbius sum itself, with no hypothesis checks."""
    return mobius_sum(lambda k: nielsen_number(pair, k), m)


def np_mobius(
    pair: TorusPair, m: int, *, force_unsafe: bool = False, budget: int = DEFAULT_CLASS_BUDGET
) -> int:
    """NP_m by Möbius inversion of Nielsen numbers, refused unless its hypotheses hold."""
    if not force_unsafe:
        failures, _ = formula_hypotheses(pair, m, budget)
        if failures:
            raise PreconditionError(f"Möbius NP_{m}", failures)
    return np_mobius_formula(pair, m)


def nphi(pair: TorusPair, n: int) -> int:
    """Sum of np_direct over the divisors of n (valid for essentially reducible pairs)."""
    if not essentially_reducible_check(pair, n):
        raise PreconditionError(f"NPhi_{n}", ["pair is not essentially reducible"])
    return sum(np_direct(pair, m) for m in divisors(n))


def nphi_toral(
    pair: TorusPair, n: int, *, force_unsafe: bool = False, budget: int = DEFAULT_CLASS_BUDGET
) -> int:
    """NPhi_n = N(f^n, g^n), under the same hypotheses as np_mobius."""
    if not force_unsafe:
        failures, _ = formula_hypotheses(pair, n, budget)
        if failures:
            raise PreconditionError(f"toral NPhi_{n}", failures)
    return nielsen_number(pair, n)


def nphi_tree(
    pair: TorusPair, n: int, *, force_unsafe: bool = False, budget: int = DEFAULT_CLASS_BUDGET
) -> int:
    """Inclusion-exclusion over the essential levels M = {m | n : N(f^m, g^m) != 0}.

    Each nonempty subset mu of M contributes (-1)^(|mu|-1) N at level gcd(mu).
    """
    N = {m: nielsen_number(pair, m) for m in divisors(n)}
    essential = [m for m in N if N[m]]
    if not force_unsafe:
        failures = []
        for m in essential:
            failures += [f"level {m}: {f}" for f in formula_hypotheses(pair, m, budget)[0]]
        if failures:
            raise PreconditionError(f"tree NPhi_{n}", failures)
    total = 0
    for k in range(1, len(essential) + 1):
        for mu in combinations(essential, k):
            total += (-1) ** (k - 1) * N[gcd(*mu)]
    return total


@dataclass(frozen=True)
class InvertibleGReport:
    n: int
    det_coincidence: int  # |det(G^n - F^n)|
    det_periodic: int  # |det(I - G^-n F^n)|
    np_coincidence: int  # Möbius sum of |det(G^k - F^k)|
    np_periodic: int  # Möbius sum of |det(I - (G^-1 F)^k)|
    commuting: bool

    @property
    def det_equal(self) -> bool:
        return self.det_coincidence == self.det_periodic

    @property
    def np_equal(self) -> bool:
        return self.np_coincidence == self.np_periodic


def invertible_g_crosscheck(pair: TorusPair, n: int) -> InvertibleGReport:
    """Compare coincidence counts of (F, G) with periodic-point counts of G^-1 F.

    Both equalities need G unimodular; the second also needs FG = GF, and
    the report records whether it holds.
    """
    if abs(det(pair.G)) != 1:
        raise ValueError(f"G is not unimodular (det G = {det(pair.G)})")
    r = pair.r
    G_inv = unimodular_inverse(pair.G)
    I = IntMatrix.identity(r)
    H = G_inv @ pair.F
    det_periodic = abs(det(I - mat_pow(G_inv, n) @ mat_pow(pair.F, n)))
    return InvertibleGReport(
        n,
        nielsen_number(pair, n),
        det_periodic,
        np_mobius_formula(pair, n),
        mobius_sum(lambda k: abs(det(I - mat_pow(H, k))), n),
        pair.commuting,
    )


def level_reports(
    pair: TorusPair,
    n: int,
    *,
    budget: int = DEFAULT_CLASS_BUDGET,
    gcd_verdict: Callable[[int], bool] | None = None,
) -> list[LevelReport]:
    """One report per divisor of n, with NP and NPhi from class counting.

    `gcd_verdict(m)` overrides the default reducibility-to-gcd decision.
    """
    reports = []
    for m in divisors(n):
        S = reid_set(pair, m)
        flags = {WEAKLY_JIANG_ASSUMED}
        if essentially_reducible_check(pair, m):
            flags.add(ESSENTIALLY_REDUCIBLE)
        if all(injective_on_boosts(pair, d, m)[0] for d in divisors(m)):
            flags.add(INJECTIVE_BOOSTS)
        if gcd_verdict is not None:
            gcd_ok = gcd_verdict(m)
        else:
            gcd_ok = bool(nielsen_number(pair, m)) and _gcd_verdict(pair, m, budget)[0]
        if gcd_ok:
            flags.add(GCD_REDUCIBLE)
        # NPhi as a sum of NP is only meaningful for essentially reducible pairs
        phi = nphi(pair, m) if ESSENTIALLY_REDUCIBLE in flags else None
        reports.append(
            LevelReport(m, S.order, nielsen_number(pair, m), np_direct(pair, m), phi, frozenset(flags))
        )
    return reports
