"""Geometric ground truth on the circle.

Linear representatives x -> a x and x -> b x (mod 1) are handled in exact
rationals.  A level-n coincidence point x satisfies (b^n - a^n) x in Z, and
the linear path from 0 to x gives it the class label (b^n - a^n) x, read
modulo |b^n - a^n|.  Three small nonlinear demos use floats with an
explicit tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from scipy.optimize import bisect

from .circle import CirclePair, circle_iota
from .errors import InfiniteReidemeisterError, LevelError
from .invariants import divisors

TOLERANCE = 1e-9
BISECT_XTOL = 1e-13


def _level_modulus(p: CirclePair, n: int) -> int:
    if n < 1:
        raise LevelError(f"levels start at 1, got {n}")
    D = p.b**n - p.a**n
    if D == 0:
        raise InfiniteReidemeisterError(f"a^{n} = b^{n}: every point is a coincidence")
    return D


def coincidence_points(p: CirclePair, n: int) -> set[Fraction]:
    N = abs(_level_modulus(p, n))
    return {Fraction(k, N) for k in range(N)}


def is_coincidence(p: CirclePair, n: int, x: Fraction) -> bool:
    return (p.a**n * x - p.b**n * x).denominator == 1


def class_label(p: CirclePair, n: int, x: Fraction) -> int:
    D = _level_modulus(p, n)
    w = D * Fraction(x)
    if w.denominator != 1:
        raise ValueError(f"{x} is not a coincidence point at level {n}")
    return int(w) % abs(D)


def oracle_mp(p: CirclePair, n: int) -> int:
    """Level-n coincidence points of the linear pair lying on no lower level.

    Points are j/N with N = |b^n - a^n|.  Such a point is a level-m
    coincidence iff N divides (b^m - a^m) j, i.e. iff j is a multiple of
    N / gcd(N, b^m - a^m); every proper divisor m is marked off.
    """
    N = abs(_level_modulus(p, n))
    marked = bytearray(N)
    for m in divisors(n)[:-1]:
        step = N // math.gcd(N, _level_modulus(p, m))
        marked[::step] = b"\x01" * len(range(0, N, step))
    return N - sum(marked)


@dataclass(frozen=True)
class BoostCheckReport:
    m: int
    n: int
    iota: int
    points_checked: int
    failures: tuple[Fraction, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def oracle_boost_check(p: CirclePair, m: int, n: int) -> BoostCheckReport:
    """label_n(x) == iota_{m,n} label_m(x) mod |b^n - a^n| for every level-m point x."""
    iota = circle_iota(p, m, n)
    Dm, Dn = _level_modulus(p, m), _level_modulus(p, n)
    Nm, Nn = abs(Dm), abs(Dn)
    q = Dn // Nm  # exact: b^m - a^m divides b^n - a^n
    failures = []
    for j in range(Nm):
        # x = j / Nm; label_m = Dm x, label_n = Dn x, both integers
        label_m = (Dm // Nm) * j % Nm
        label_n = q * j % Nn
        if label_n != iota * label_m % Nn:
            failures.append(Fraction(j, Nm))
    return BoostCheckReport(m, n, iota, Nm, tuple(failures))


@dataclass(frozen=True)
class Trajectory:
    points: tuple[Fraction, ...]
    cycle_length: int | None  # None when the cap was reached first
    cycle_start: int | None


def trajectory(p: CirclePair, x: Fraction, map_choice: str = "f", cap: int = 10_000) -> Trajectory:
    if map_choice not in ("f", "g"):
        raise ValueError(f"map_choice must be 'f' or 'g', got {map_choice!r}")
    degree = p.a if map_choice == "f" else p.b
    seen: dict[Fraction, int] = {}
    pts = []
    y = Fraction(x) % 1
    while len(pts) < cap:
        if y in seen:
            return Trajectory(tuple(pts), len(pts) - seen[y], seen[y])
        seen[y] = len(pts)
        pts.append(y)
        y = (degree * y) % 1
    return Trajectory(tuple(pts), None, None)


@dataclass
class DemoCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class DemoReport:
    name: str
    values: dict = field(default_factory=dict)
    checks: list[DemoCheck] = field(default_factory=list)

    def check(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(DemoCheck(name, bool(passed), detail))

    def get(self, name: str) -> DemoCheck:
        return next(c for c in self.checks if c.name == name)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


# --- mcexample: f(x) = -x, g(x) = x + eps -------------------------------------


def _reflection_rotation_solutions(n: int, eps: Fraction) -> list[Fraction] | None:
    """Solutions of (-1)^n x = x + n eps (mod 1); None means every x solves it."""
    c = (-1) ** n - 1
    if c == 0:
        return None if (n * eps).denominator == 1 else []
    return sorted({((n * eps + k) / c) % 1 for k in range(abs(c))})


def demo_mcexample(eps: Fraction = Fraction(1, 10)) -> DemoReport:
    rep = DemoReport("mcexample", {"eps": str(eps)})
    lvl1 = _reflection_rotation_solutions(1, eps)
    lvl2 = _reflection_rotation_solutions(2, eps)
    rep.values.update(level1=[str(x) for x in lvl1], level2=[] if lvl2 is None else [str(x) for x in lvl2])
    rep.check("two coincidences at level 1", lvl1 is not None and len(lvl1) == 2, str(lvl1))
    rep.check("level-1 solutions verify", all((-x) % 1 == (x + eps) % 1 for x in lvl1))
    rep.check("no coincidences at level 2", lvl2 == [], "2 eps is not an integer")
    # degrees: f has degree -1, g (a rotation) degree 1
    linear = CirclePair(-1, 1)
    N1, N2 = abs(linear.b - linear.a), abs(linear.b**2 - linear.a**2)
    rep.values.update(N1=N1, N2=N2)
    rep.check("algebraic N(f, g) = 2", N1 == 2)
    rep.check("algebraic N(f^2, g^2) = 0", N2 == 0)
    return rep


# --- nondivide: f(x) = 2x, g(x) = x^eps on [0, 1] ------------------------------


def _winding(f_end: float, g_end: float, k: int) -> tuple[int, bool]:
    """Winding difference of the image paths of [0, q] and whether it is trivial
    in the level-k Reidemeister group Z_{2^k - 1}."""
    w = round(f_end - g_end)
    return w, w % (2**k - 1) == 0


def _nondivide_witness(q: float, eps: float, g_iter: Callable[[float, int], float]) -> dict:
    out = {}
    for k in (3, 5):
        f_end = 2**k * q
        g_end = g_iter(q, k)
        residual = abs((f_end % 1) - g_end)
        w, trivial = _winding(f_end, g_end, k)
        out[k] = dict(residual=residual, f_crosses=f_end > 1, g_crosses=g_end >= 1, winding=w, equivalent=trivial)
    return out


def demo_nondivide() -> DemoReport:
    """The pair q, eps chosen so q is a coincidence at levels 3 and 5 only.

    z solves z^5 - 4z^3 + 1 = 0 near 0.6541, q = z^3 / 8 and
    eps = log(8q) / (3 log q).  These make 8q = q^(3 eps) and
    32q - 1 = q^(5 eps).  The k-th iterate of x -> x^eps is x^(eps^k),
    not x^(k eps), so the same q, eps are also checked against true
    iterates, and a second pair solving the true equations is reported.
    """
    rep = DemoReport("nondivide")
    z = bisect(lambda t: t**5 - 4 * t**3 + 1, 0.6, 0.7, xtol=BISECT_XTOL)
    q = z**3 / 8
    eps = math.log(8 * q) / (3 * math.log(q))
    rep.values.update(z=z, q=q, eps=eps)
    rep.check("q ~ 0.0349", math.floor(q * 1e4) / 1e4 == 0.0349, f"q = {q:.10f}")
    rep.check("eps ~ 0.1265", math.floor(eps * 1e4) / 1e4 == 0.1265, f"eps = {eps:.10f}")
    rep.check("f(q) != g(q)", abs(2 * q - q**eps) > TOLERANCE, f"{2 * q:.6f} vs {q ** eps:.6f}")

    scaled = _nondivide_witness(q, eps, lambda x, k: x ** (k * eps))
    for k, d in scaled.items():
        rep.check(f"level {k} coincidence with g^{k}(q) = q^({k} eps)", d["residual"] < TOLERANCE, f"{d['residual']:.3e}")
    rep.check("level 3 paths avoid the base point", not scaled[3]["f_crosses"] and not scaled[3]["g_crosses"])
    rep.check("level 3: 0 and q Nielsen equivalent", scaled[3]["equivalent"], f"winding {scaled[3]['winding']}")
    rep.check("level 5: f^5 path crosses the base point", scaled[5]["f_crosses"])
    rep.check(
        "level 5: 0 and q not equivalent, winding a generator",
        not scaled[5]["equivalent"] and math.gcd(scaled[5]["winding"], 31) == 1,
        f"winding {scaled[5]['winding']} in Z_31",
    )

    true_it = _nondivide_witness(q, eps, lambda x, k: x ** (eps**k))
    rep.values["true_iterate_residuals"] = {k: d["residual"] for k, d in true_it.items()}
    rep.check("|f^3(q) - g^3(q)| < 1e-9 with true iterates", true_it[3]["residual"] < TOLERANCE, f"{true_it[3]['residual']:.6f}")
    rep.check("|f^5(q) - g^5(q) mod 1| < 1e-9 with true iterates", true_it[5]["residual"] < TOLERANCE, f"{true_it[5]['residual']:.6f}")

    # a pair solving the true-iterate equations: 8q = q^(e^3), 32q - 1 = q^(e^5)
    def e_of(x: float) -> float:
        return (math.log(8 * x) / math.log(x)) ** (1 / 3)

    def h(x: float) -> float:
        return math.log(32 * x - 1) - e_of(x) ** 5 * math.log(x)

    q2 = bisect(h, 0.0513, 0.058, xtol=1e-15)
    e2 = e_of(q2)
    fixed = _nondivide_witness(q2, e2, lambda x, k: x ** (e2**k))
    rep.values.update(corrected_q=q2, corrected_eps=e2)
    rep.check("corrected pair: f(q) != g(q)", abs(2 * q2 - q2**e2) > TOLERANCE)
    for k, d in fixed.items():
        rep.check(f"corrected pair: level {k} residual < 1e-9", d["residual"] < TOLERANCE, f"{d['residual']:.3e}")
    rep.check("corrected pair: level 3 equivalent", fixed[3]["equivalent"] and not fixed[3]["f_crosses"])
    rep.check("corrected pair: level 5 inequivalent", not fixed[5]["equivalent"] and fixed[5]["f_crosses"])
    return rep


# --- noorbits2: degrees 4 and -3 ------------------------------------------------


def demo_noorbits2() -> DemoReport:
    p = CirclePair(4, -3)
    rep = DemoReport("noorbits2", {"a": 4, "b": -3})
    pts = coincidence_points(p, 1)
    rep.check("seven level-1 coincidences k/7", pts == {Fraction(k, 7) for k in range(7)})
    t = trajectory(p, Fraction(1, 7), "f")
    rep.values["trajectory"] = [str(x) for x in t.points]
    rep.check("trajectory of 1/7 is {1/7, 4/7, 2/7}", t.points == (Fraction(1, 7), Fraction(4, 7), Fraction(2, 7)))
    rep.check("cycle length 3", t.cycle_length == 3)
    rep.check("trajectory lies in the coincidence set", set(t.points) <= pts)
    return rep


DEMOS = {"mcexample": demo_mcexample, "nondivide": demo_nondivide, "noorbits2": demo_noorbits2}


def run_demo(name: str) -> DemoReport:
    try:
        return DEMOS[name]()
    except KeyError:
        raise ValueError(f"unknown demo {name!r}; choose from {sorted(DEMOS)}") from None
