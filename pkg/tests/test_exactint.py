from __future__ import annotations

from itertools import combinations, product
from math import gcd

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form

from conftest import int_matrices
from nielsen_iterates.errors import RankDeficientError
from nielsen_iterates.exactint import (
    IntMatrix,
    det,
    lattice_from_columns,
    lattice_index,
    lattice_intersect,
    mat_pow,
    snf,
    solve_linear,
    unimodular_inverse,
)

F = IntMatrix.from_rows([[-2, 2], [1, 2]])
G = IntMatrix.from_rows([[-1, 0], [1, 1]])


def sympy_invariants(A: IntMatrix) -> list[int]:
    D = smith_normal_form(sympy.Matrix(A.tolist()), domain=sympy.ZZ)
    return sorted(abs(int(D[i, i])) for i in range(min(A.shape)))


def test_snf_examples():
    assert snf(IntMatrix.identity(2)).factors == (1, 1)
    assert snf(IntMatrix.from_rows([[2, 4], [6, 8]])).factors == (2, 4)
    assert snf(G - F).factors == (1, 1)


def test_det_examples():
    assert det(IntMatrix.identity(2)) == 1
    assert det(F - G) == -1
    assert mat_pow(F, 2) == IntMatrix.scalar(6, 2)
    assert mat_pow(G, 2) == IntMatrix.identity(2)
    assert det(mat_pow(F, 2) - mat_pow(G, 2)) == 25
    with pytest.raises(ValueError):
        det(IntMatrix.from_rows([[1, 2]]))


def test_thirtieth_powers_stay_exact():
    A = mat_pow(G, 30) - mat_pow(F, 30)
    assert abs(det(A)) == 221073919719792987930625
    assert int(sympy.Matrix(A.tolist()).det()) == det(A)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: int_matrices(r, c))))
def test_snf_decomposition_properties(A):
    dec = snf(A)
    assert dec.U @ A @ dec.V == dec.D
    assert abs(det(dec.U)) == 1 and abs(det(dec.V)) == 1
    f = dec.factors
    assert all(x >= 0 for x in f)
    nonzero = [x for x in f if x]
    assert f[: len(nonzero)] == tuple(nonzero)  # zeros trail
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    for i in range(A.nrows):
        for j in range(A.ncols):
            assert dec.D[i, j] == (f[i] if i == j else 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: int_matrices(r, r, -20, 20)))
def test_snf_and_det_match_sympy(A):
    assert sorted(snf(A).factors) == sympy_invariants(A)
    assert det(A) == int(sympy.Matrix(A.tolist()).det())


@settings(max_examples=60, deadline=None)
@given(int_matrices(3, 3, -4, 4), st.integers(0, 6))
def test_mat_pow_matches_repeated_product(A, n):
    expected = IntMatrix.identity(3)
    for _ in range(n):
        expected = expected @ A
    assert mat_pow(A, n) == expected


def test_unimodular_inverse():
    Gi = unimodular_inverse(G)
    assert Gi @ G == IntMatrix.identity(2)
    with pytest.raises(ValueError):
        unimodular_inverse(F)


def brute_members(L, radius):
    return {v for v in product(range(-radius, radius + 1), repeat=L.ambient_rank) if L.contains(v)}


def test_lattice_intersection_examples():
    a = lattice_from_columns([[224]], 1)
    b = lattice_from_columns([[1456]], 1)
    assert lattice_index(lattice_intersect(a, b)) == 2912
    two = lattice_from_columns([[2, 0], [0, 2]], 2)
    three = lattice_from_columns([[3, 0], [0, 3]], 2)
    assert lattice_intersect(two, three) == lattice_from_columns([[6, 0], [0, 6]], 2)


@settings(max_examples=60, deadline=None)
@given(int_matrices(2, 3, -5, 5), int_matrices(2, 3, -5, 5))
def test_lattice_intersection_against_enumeration(A, B):
    try:
        L1 = lattice_from_columns(A, full_rank=True)
        L2 = lattice_from_columns(B, full_rank=True)
    except RankDeficientError:
        return
    inter = lattice_intersect(L1, L2)
    R = 12
    assert brute_members(inter, R) == brute_members(L1, R) & brute_members(L2, R)
    assert lattice_index(inter) % lattice_index(L1) == 0
    # index of a column span = gcd of its maximal minors
    cols = A.columns()
    minors = [cols[i][0] * cols[j][1] - cols[i][1] * cols[j][0] for i, j in combinations(range(3), 2)]
    assert lattice_index(L1) == gcd(*minors)


def test_hnf_is_canonical():
    L1 = lattice_from_columns([[2, 0], [1, 3]], 2)
    L2 = lattice_from_columns([[1, 3], [3, 3], [2, 0]], 2)  # same span, extra column, other order
    assert L1 == L2
    assert L1 <= lattice_from_columns([[1, 0], [0, 1]], 2)


def test_rank_deficient_refused():
    with pytest.raises(RankDeficientError):
        lattice_from_columns([[1, 2], [2, 4]], 2, full_rank=True)


def test_solve_linear():
    x, K = solve_linear(IntMatrix.from_rows([[8, 32]]), [16])
    assert 8 * x[0] + 32 * x[1] == 16
    assert all(8 * k[0] + 32 * k[1] == 0 for k in K.columns()) and K.ncols == 1
    assert solve_linear(IntMatrix.from_rows([[8, 32]]), [4]) is None


@settings(max_examples=80, deadline=None)
@given(int_matrices(2, 3, -6, 6), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_solve_linear_finds_constructed_solutions(A, x):
    b = A.apply(x)
    sol = solve_linear(A, b)
    assert sol is not None
    x0, K = sol
    assert A.apply(x0) == b
    for k in K.columns():
        assert A.apply(k) == (0, 0)
    # the kernel basis spans the whole integer kernel: x - x0 is in it
    diff = [a - c for a, c in zip(x, x0)]
    if any(diff):
        assert K.ncols > 0
        assert solve_linear(K, diff) is not None
