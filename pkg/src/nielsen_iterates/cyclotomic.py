"""Integer polynomials, cyclotomic polynomials and boost polynomials."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import zip_longest
from math import gcd, prod

from sympy import divisors

from .errors import LevelError


@dataclass(frozen=True)
class IntPoly:
    """Coefficients lowest degree first, with no trailing zeros (zero is ())."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> IntPoly:
        return cls((0,) * k + (c,))

    @classmethod
    def const(cls, c: int) -> IntPoly:
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: IntPoly) -> IntPoly:
        return IntPoly(tuple(x + y for x, y in zip_longest(self.coeffs, other.coeffs, fillvalue=0)))

    def __neg__(self) -> IntPoly:
        return IntPoly(tuple(-x for x in self.coeffs))

    def __sub__(self, other: IntPoly) -> IntPoly:
        return self + (-other)

    def __mul__(self, other: IntPoly) -> IntPoly:
        if not self or not other:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return IntPoly(tuple(out))

    def divmod(self, other: IntPoly) -> tuple[IntPoly, IntPoly]:
        """Division over Z; the divisor's leading coefficient must divide each step."""
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        lead = other.coeffs[-1]
        q = [0] * max(len(rem) - len(other.coeffs) + 1, 0)
        for i in range(len(q) - 1, -1, -1):
            top = rem[i + other.degree]
            if top % lead:
                raise ArithmeticError(f"{self} / {other} leaves the integers")
            t = top // lead
            q[i] = t
            if t:
                for j, y in enumerate(other.coeffs):
                    rem[i + j] -= t * y
        return IntPoly(tuple(q)), IntPoly(tuple(rem))

    def exact_div(self, other: IntPoly) -> IntPoly:
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self} (remainder {r})")
        return q

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_power(self, k: int) -> IntPoly:
        """self(x^k)."""
        out = [0] * (k * self.degree + 1) if self else []
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return IntPoly(tuple(out))

    def __str__(self) -> str:
        if not self:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mag = abs(c)
            body = "" if mag == 1 and i else str(mag)
            if i:
                body += "x" if i == 1 else f"x^{i}"
            sign = "-" if c < 0 else "+"
            parts.append(("-" if c < 0 else "") + body if not parts else f" {sign} {body}")
        return "".join(parts)



def sigma(p: int, q: int) -> IntPoly:
    """1 + x^p + x^{2p} + ... + x^{q-p}."""
    if p < 1 or q % p:
        raise LevelError(f"{p} does not divide {q}")
    out = [0] * (q - p + 1)
    for i in range(0, q, p):
        out[i] = 1
    return IntPoly(tuple(out))


@lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> IntPoly:
    if d < 1:
        raise ValueError(f"cyclotomic index must be positive, got {d}")
    rest = prod((cyclotomic_poly(e) for e in divisors(d)[:-1]), start=IntPoly((1,)))
    return (IntPoly.monomial(d) - IntPoly.const(1)).exact_div(rest)


def cyclotomic_product(indices) -> IntPoly:
    return prod((cyclotomic_poly(r) for r in sorted(indices)), start=IntPoly((1,)))


def _require_coprime(k: int, m: int) -> None:
    if k < 1 or m < 1 or gcd(k, m) != 1:
        raise LevelError(f"{k} and {m} must be coprime positive integers")


def cyclolemma_quotient(k: int, m: int) -> IntPoly:
    """p(x) with sigma_{k,km} = p sigma_{1,m}, sigma_{m,km} = p sigma_{1,k},
    sigma_{1,km} = p sigma_{1,k} sigma_{1,m}.

    Every identity is checked by exact division; a failure raises
    ArithmeticError since it would mean an arithmetic bug.
    """
    _require_coprime(k, m)
    n = k * m
    p = sigma(k, n).exact_div(sigma(1, m))
    if sigma(m, n) != p * sigma(1, k) or sigma(1, n) != p * sigma(1, k) * sigma(1, m):
        raise ArithmeticError(f"boost polynomial identities fail for k={k}, m={m}")
    product_form = cyclotomic_product(
        {x * y for x in divisors(m) for y in divisors(k) if x != 1 and y != 1}
    )
    if product_form != p:
        raise ArithmeticError(f"cyclotomic product for k={k}, m={m} disagrees with the quotient")
    return p


def factor_index_sets(k: int, m: int) -> tuple[frozenset[int], frozenset[int]]:
    """(R, S) with R = {r : lcm(r, k) = ck for some c | m, c != 1} and
    S = {xy : x | m, y | k, x != 1}.  For coprime k, m they coincide."""
    _require_coprime(k, m)
    R = frozenset(
        r
        for c in divisors(m)[1:]
        for r in divisors(c * k)
        if r * k // gcd(r, k) == c * k
    )
    S = frozenset(x * y for x in divisors(m)[1:] for y in divisors(k))
    return R, S


@dataclass(frozen=True)
class CompositionReport:
    c: int
    k: int
    lhs: IntPoly  # Phi_c(x^k)
    rhs: IntPoly  # product of Phi_r over lcm(r, k) = ck
    indices: tuple[int, ...]
    degenerate: bool  # c = 1

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def phi_composition(c: int, k: int) -> CompositionReport:
    _require_coprime(c, k)
    indices = tuple(r for r in divisors(c * k) if r * k // gcd(r, k) == c * k)
    return CompositionReport(
        c, k, cyclotomic_poly(c).compose_power(k), cyclotomic_product(indices), indices, c == 1
    )


def iota_via_sigma(pair, m: int, n: int) -> int:
    """a^(n-m) sigma_{m,n}(b/a), evaluated in exact rationals.  Needs a != 0."""
    if pair.a == 0:
        raise ValueError("a = 0: use the defining boost sum instead")
    value = pair.a ** (n - m) * sigma(m, n)(Fraction(pair.b, pair.a))
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral boost {value}")
    return int(value)
