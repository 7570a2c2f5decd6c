"""Regression manifest of published worked-example values.

Each check records the expected value, what the code computes, and a
status: PASS, FAIL, or ERRATUM when the published value is recorded as a
misprint and the computed value is shown alongside it.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterator

from .circle import CirclePair, circle_iota, circle_reid_order
from .cyclotomic import cyclolemma_quotient, factor_index_sets
from .errors import InfiniteReidemeisterError, PreconditionError
from .exactint import lattice_intersect
from .geom_oracle import run_demo
from .invariants import (
    gcd_reducible_check,
    invertible_g_crosscheck,
    nielsen_number,
    np_bounds,
    np_direct,
    np_mobius,
    np_mobius_formula,
    nphi,
    nphi_toral,
)
from .klein import PRINTED_N3_WORKED_PAIR, KleinPair, klein_nielsen, klein_np, klein_nphi
from .reidemeister import TorusPair, boost_map, image_subgroup, reid_set, subgroup_order

PASS, FAIL, ERRATUM = "PASS", "FAIL", "ERRATUM"

MATRIX_F = [[-2, 2], [1, 2]]
MATRIX_G = [[-1, 0], [1, 1]]
MATRIX_DETS = {
    1: 1, 2: 25, 3: 181, 5: 7561, 6: 46225, 10: 60450625, 15: 470183304961,
    30: 221073919719792987930625,
}
MATRIX_NP30 = 221073919719322744136580


@dataclass(frozen=True)
class Check:
    name: str
    expected: str
    actual: str
    status: str
    note: str = ""


def _eq(name: str, expected, actual, note: str = "") -> Check:
    return Check(name, str(expected), str(actual), PASS if expected == actual else FAIL, note)


def _circle_checks() -> Iterator[Check]:
    p = CirclePair(6, 2)
    pair = p.torus()
    for n, want in zip((1, 2, 3, 6), (4, 32, 208, 46592)):
        yield _eq(f"circle (6,2): |R_{n}|", want, circle_reid_order(p, n))
    for m, want in zip((1, 2, 3), (11648, 1456, 224)):
        yield _eq(f"circle (6,2): iota_{{{m},6}}", want, circle_iota(p, m, 6))
    target = reid_set(pair, 6)
    im2 = image_subgroup(boost_map(pair, 2, 6), target)
    im3 = image_subgroup(boost_map(pair, 3, 6), target)
    yield _eq("circle (6,2): order of im iota_{2,6}", 32, subgroup_order(im2, target))
    yield _eq("circle (6,2): order of im iota_{3,6}", 208, subgroup_order(im3, target))
    yield _eq(
        "circle (6,2): order of the intersection", 16,
        subgroup_order(lattice_intersect(im2, im3), target),
    )
    yield _eq("circle (6,2): NP_6 by inclusion-exclusion", 46368, np_direct(pair, 6))
    yield _eq("circle (6,2): bounds 46352 <= NP_6 <= 46592", (46352, 46592), np_bounds(pair, 6))
    try:
        np_mobius(pair, 6)
        yield Check("circle (6,2): Möbius NP_6 refused", "refused", "accepted", FAIL)
    except PreconditionError as exc:
        yield Check("circle (6,2): Möbius NP_6 refused", "refused", "refused", PASS, str(exc))
    forced = np_mobius(pair, 6, force_unsafe=True)
    yield _eq("circle (6,2): forced Möbius value (UNSAFE)", 46356, forced, "differs from NP_6 = 46368")
    yield _eq("circle (6,2): not reducible to the gcd at level 6", False, gcd_reducible_check(pair, 6))
    yield _eq("circle (6,2): NPhi_6", 46604, nphi(pair, 6))


def _matrix_checks() -> Iterator[Check]:
    pair = TorusPair.from_lists(MATRIX_F, MATRIX_G, allow_noncommuting=True)
    for n, want in MATRIX_DETS.items():
        yield _eq(f"matrix pair: |det(G^{n} - F^{n})|", want, nielsen_number(pair, n))
    yield _eq("matrix pair: Möbius NP_30 (formula only)", MATRIX_NP30, np_mobius_formula(pair, 30))
    yield _eq("matrix pair: toral NPhi_30 (formula only)", MATRIX_DETS[30], nphi_toral(pair, 30, force_unsafe=True))
    yield Check(
        "matrix pair: F and G commute",
        "FG = GF",
        f"FG = {pair.F @ pair.G}, GF = {pair.G @ pair.F}",
        ERRATUM,
        "the pair does not commute, so boosts and the formula hypotheses are unavailable; "
        "the two values above are reproduced as formula arithmetic only",
    )
    report = invertible_g_crosscheck(pair, 30)
    yield _eq("matrix pair: |det(G^30-F^30)| = |det(I-G^-30 F^30)|", True, report.det_equal)


def _klein_checks() -> Iterator[Check]:
    p = KleinPair((2, 3), (3, 5))
    for n, want in ((1, 6), (2, 144), (6, 10859184)):
        yield _eq(f"Klein (2,3),(3,5): N at level {n}", want, klein_nielsen(p, n))
    n3 = klein_nielsen(p, 3)
    consistent = klein_nielsen(p, 6) - n3 - klein_nielsen(p, 2) + klein_nielsen(p, 1) == 10856400
    yield Check(
        "Klein (2,3),(3,5): N at level 3",
        str(PRINTED_N3_WORKED_PAIR),
        str(n3),
        ERRATUM if consistent and n3 != PRINTED_N3_WORKED_PAIR else FAIL,
        f"published value {PRINTED_N3_WORKED_PAIR}; formula gives {n3}; NP_6 consistent with {n3}",
    )
    yield _eq("Klein (2,3),(3,5): NP_6", 10856400, klein_np(p, 6))
    yield _eq("Klein (2,3),(3,5): NPhi_6", 10859184, klein_nphi(p, 6))


def _roots_checks() -> Iterator[Check]:
    pair = CirclePair(2, 0).torus()
    for prime in (2, 3):
        for k in (1, 2):
            n = prime**k
            yield _eq(f"constant g, a=2: NP_{n}", 2**n - 2 ** (n // prime), np_direct(pair, n))
            yield _eq(f"constant g, a=2: NPhi_{n}", 2**n, nphi(pair, n))


def _demo_checks() -> Iterator[Check]:
    for name in ("mcexample", "noorbits2"):
        for c in run_demo(name).checks:
            yield Check(f"{name}: {c.name}", "true", str(c.passed).lower(), PASS if c.passed else FAIL, c.detail)
    rep = run_demo("nondivide")
    true_iterate = {c.name for c in rep.checks if "true iterates" in c.name}
    for c in rep.checks:
        if c.name in true_iterate and not c.passed:
            note = (
                f"{c.detail}; the published equations use q^(k eps) for the k-th iterate of x^eps; "
                f"a pair solving the true equations is q = {rep.values['corrected_q']:.10f}, "
                f"eps = {rep.values['corrected_eps']:.10f}"
            )
            yield Check(f"nondivide: {c.name}", "true", "false", ERRATUM, note)
        else:
            yield Check(f"nondivide: {c.name}", "true", str(c.passed).lower(), PASS if c.passed else FAIL, c.detail)


def circlegcd_sweep(n: int, bound: int = 5) -> tuple[list[tuple[int, int]], int]:
    """Disagreements between the brute-force check and gcd(a,b) = 1, and the skip count."""
    values = [v for v in range(-bound, bound + 1) if v]
    bad, skipped = [], 0
    for a in values:
        for b in values:
            if a == b:
                continue
            try:
                verdict = gcd_reducible_check(CirclePair(a, b).torus(), n)
            except InfiniteReidemeisterError:
                skipped += 1
                continue
            if verdict != (gcd(a, b) == 1):
                bad.append((a, b))
    return bad, skipped


def _sweep_checks() -> Iterator[Check]:
    bad, skipped = circlegcd_sweep(6)
    yield Check(
        "circle gcd criterion, 1 <= |a|,|b| <= 5, level 6",
        "0 disagreements",
        f"{len(bad)} disagreements",
        PASS if not bad else FAIL,
        f"{skipped} pairs with a = -b skipped (infinite Reidemeister set at even levels)",
    )
    failures = []
    for k in range(1, 61):
        for m in range(1, 61 // k + 1):
            if gcd(k, m) == 1:
                try:
                    cyclolemma_quotient(k, m)
                    R, S = factor_index_sets(k, m)
                    if R != S:
                        failures.append((k, m))
                except ArithmeticError:
                    failures.append((k, m))
    yield _eq("cyclotomic quotient identities and R = S, coprime km <= 60", [], failures)


def manifest() -> list[Check]:
    out: list[Check] = []
    for section in (_circle_checks, _matrix_checks, _klein_checks, _roots_checks, _demo_checks, _sweep_checks):
        try:
            out.extend(section())
        except Exception as exc:
            out.append(Check(section.__name__.strip("_"), "completes", f"error: {exc}", FAIL))
    return out
