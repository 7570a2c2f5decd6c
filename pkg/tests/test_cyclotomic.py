from __future__ import annotations

from math import gcd

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from nielsen_iterates.circle import CirclePair, circle_iota
from nielsen_iterates.cyclotomic import (
    IntPoly,
    cyclolemma_quotient,
    cyclotomic_poly,
    factor_index_sets,
    iota_via_sigma,
    phi_composition,
    sigma,
)
from nielsen_iterates.errors import LevelError

x = sympy.symbols("x")


def to_sympy(P: IntPoly):
    return sum(c * x**i for i, c in enumerate(P.coeffs))


polys = st.lists(st.integers(-9, 9), max_size=7).map(lambda c: IntPoly(tuple(c)))


def test_canonical_form():
    assert IntPoly((1, 2, 0, 0)).coeffs == (1, 2)
    assert IntPoly((0, 0)).coeffs == ()
    assert str(IntPoly((1, -1, 1))) == "x^2 - x + 1"
    assert str(IntPoly((-3, 0, 0, -1))) == "-x^3 - 3"
    assert str(IntPoly()) == "0"


@given(polys, polys)
def test_arithmetic_matches_sympy(P, Q):
    assert sympy.expand(to_sympy(P + Q) - (to_sympy(P) + to_sympy(Q))) == 0
    assert sympy.expand(to_sympy(P * Q) - to_sympy(P) * to_sympy(Q)) == 0


@given(polys, polys.filter(lambda Q: Q and abs(Q.coeffs[-1]) == 1))
def test_division_by_monic(P, Q):
    q, r = P.divmod(Q)
    assert q * Q + r == P
    assert r.degree < Q.degree


def test_inexact_division_raises():
    with pytest.raises(ArithmeticError):
        IntPoly((1, 0, 1)).exact_div(IntPoly((1, 1)))
    with pytest.raises(ArithmeticError):
        IntPoly((1, 1)).divmod(IntPoly((0, 2)))


def test_sigma():
    assert sigma(1, 2).coeffs == (1, 1)
    assert sigma(2, 6).coeffs == (1, 0, 1, 0, 1)
    assert sigma(3, 6).coeffs == (1, 0, 0, 1)
    with pytest.raises(LevelError):
        sigma(4, 6)


def test_cyclotomic_examples():
    assert cyclotomic_poly(1).coeffs == (-1, 1)
    assert cyclotomic_poly(6).coeffs == (1, -1, 1)
    assert cyclotomic_poly(4).coeffs == (1, 0, 1)


@pytest.mark.parametrize("d", [1, 2, 7, 12, 30, 105, 120])
def test_cyclotomic_matches_sympy(d):
    assert sympy.expand(to_sympy(cyclotomic_poly(d)) - sympy.cyclotomic_poly(d, x)) == 0


def test_product_over_divisors_is_x_n_minus_1():
    for n in range(1, 121):
        prod = IntPoly((1,))
        for d in sympy.divisors(n):
            prod = prod * cyclotomic_poly(d)
        assert prod == IntPoly.monomial(n) - IntPoly.const(1), n


def test_sigma_is_product_of_nontrivial_cyclotomics():
    for k in range(1, 61):
        prod = IntPoly((1,))
        for d in sympy.divisors(k)[1:]:
            prod = prod * cyclotomic_poly(d)
        assert prod == sigma(1, k)


def test_quotient_examples():
    assert cyclolemma_quotient(2, 3) == cyclotomic_poly(6)
    assert cyclolemma_quotient(2, 5).coeffs == (1, -1, 1, -1, 1)
    assert cyclolemma_quotient(1, 7) == IntPoly((1,))
    with pytest.raises(LevelError):
        cyclolemma_quotient(2, 4)


def test_quotient_identities_sweep():
    for k in range(1, 61):
        for m in range(1, 60 // k + 1):
            if gcd(k, m) != 1:
                continue
            p = cyclolemma_quotient(k, m)
            n = k * m
            assert sigma(k, n) == p * sigma(1, m)
            assert sigma(m, n) == p * sigma(1, k)
            assert sigma(1, n) == p * sigma(1, k) * sigma(1, m)
            R, S = factor_index_sets(k, m)
            assert R == S


def test_composition_examples():
    r = phi_composition(3, 2)
    assert r.equal and r.indices == (3, 6)
    assert r.lhs.coeffs == (1, 0, 1, 0, 1)
    r = phi_composition(2, 3)
    assert r.equal and r.indices == (2, 6)
    r = phi_composition(1, 4)
    assert r.degenerate and r.equal
    with pytest.raises(LevelError):
        phi_composition(2, 4)


def test_composition_sweep():
    for c in range(1, 37):
        for k in range(1, 36 // c + 1):
            if gcd(c, k) == 1:
                assert phi_composition(c, k).equal, (c, k)


def test_iota_via_sigma():
    p = CirclePair(6, 2)
    assert iota_via_sigma(p, 3, 6) == 224
    assert iota_via_sigma(p, 1, 6) == 11648
    assert iota_via_sigma(p, 6, 6) == 1
    with pytest.raises(ValueError):
        iota_via_sigma(CirclePair(0, 2), 1, 2)


@given(st.integers(-6, 6).filter(bool), st.integers(-6, 6), st.sampled_from([(1, 4), (2, 6), (3, 9), (1, 1), (4, 12)]))
def test_iota_via_sigma_matches_sum(a, b, mn):
    p = CirclePair(a, b)
    assert iota_via_sigma(p, *mn) == circle_iota(p, *mn)
