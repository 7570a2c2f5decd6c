"""Reidemeister sets of iterates for commuting integer-matrix pairs.

For a torus pair with linearizations F, G the level-n Reidemeister set is
the cokernel of A_n = G^n - F^n.  Classes are stored by their Smith
coordinates, each reduced into [0, d_i).  Boosting from level m to level
n (m | n) is multiplication by

    B_{m,n} = sum_{l=0}^{n/m-1} G^{n-(l+1)m} F^{lm},

which satisfies B_{m,n} (G^m - F^m) = G^n - F^n and so descends to classes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import InfiniteReidemeisterError, LevelError, NonCommutingError
from .exactint import (
    IntMatrix,
    Lattice,
    SnfDecomposition,
    Vector,
    box,
    det,
    lattice_from_columns,
    lattice_index,
    mat_pow,
    snf,
    solve_linear,
    unimodular_inverse,
)


@dataclass(frozen=True)
class TorusPair:
    """Linearizations of a pair of self-maps of the r-torus.

    F and G must commute.  `allow_noncommuting=True` admits a non-commuting
    pair for determinant-only formulas; every boost-based operation still
    refuses it.
    """

    F: IntMatrix
    G: IntMatrix
    allow_noncommuting: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        if not (self.F.is_square and self.G.is_square) or self.F.shape != self.G.shape:
            raise ValueError(f"F and G must be square of equal size, got {self.F.shape}, {self.G.shape}")
        if not self.allow_noncommuting and not self.commuting:
            raise NonCommutingError(
                f"F = {self.F} and G = {self.G} do not commute (FG = {self.F @ self.G}, "
                f"GF = {self.G @ self.F})"
            )

    @classmethod
    def from_lists(cls, F, G, **kw) -> TorusPair:
        return cls(IntMatrix.from_rows(F), IntMatrix.from_rows(G), **kw)

    @classmethod
    def circle(cls, a: int, b: int) -> TorusPair:
        """The degree pair (a, b) on S^1 as 1x1 matrices."""
        return cls(IntMatrix.from_rows([[a]]), IntMatrix.from_rows([[b]]))

    @property
    def r(self) -> int:
        return self.F.nrows

    @property
    def commuting(self) -> bool:
        return self.F @ self.G == self.G @ self.F

    def require_commuting(self) -> None:
        if not self.commuting:
            raise NonCommutingError("boosting functions need commuting F and G")

    def relation(self, n: int) -> IntMatrix:
        """A_n = G^n - F^n."""
        return _power(self.G, n) - _power(self.F, n)


@lru_cache(maxsize=4096)
def _power(A: IntMatrix, n: int) -> IntMatrix:
    return mat_pow(A, n)


@dataclass(frozen=True)
class ReidSet:
    """Cokernel of A_n = G^n - F^n, presented through its Smith form."""

    pair: TorusPair
    level: int
    relation: IntMatrix
    snf: SnfDecomposition
    order: int | None  # None means infinite
    U_inv: IntMatrix = field(repr=False)

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def __len__(self) -> int:
        if self.order is None:
            raise InfiniteReidemeisterError(f"level {self.level} Reidemeister set is infinite")
        return self.order

    def classes(self) -> Iterator[ReidClass]:
        """Every class, in lexicographic order of Smith coordinates."""
        if self.order is None:
            raise InfiniteReidemeisterError(f"cannot enumerate the infinite set at level {self.level}")
        for coords in box(self.snf.factors):
            yield self._from_coords(coords)

    def zero(self) -> ReidClass:
        return self._from_coords((0,) * self.pair.r)

    def _from_coords(self, coords: Vector) -> ReidClass:
        return ReidClass(self.level, tuple(coords), self.U_inv.apply(coords))


@dataclass(frozen=True)
class ReidClass:
    """A class at `level`.  Equality compares level and Smith coordinates."""

    level: int
    coords: Vector
    rep: Vector = field(compare=False)


@dataclass(frozen=True)
class BoostMap:
    pair: TorusPair
    from_level: int
    to_level: int
    matrix: IntMatrix


@lru_cache(maxsize=4096)
def reid_set(pair: TorusPair, n: int) -> ReidSet:
    if n < 1:
        raise LevelError(f"levels start at 1, got {n}")
    A = pair.relation(n)
    dec = snf(A)
    d = det(A)
    return ReidSet(pair, n, A, dec, abs(d) if d else None, unimodular_inverse(dec.U))


@lru_cache(maxsize=4096)
def boost_map(pair: TorusPair, m: int, n: int) -> BoostMap:
    pair.require_commuting()
    if m < 1 or n % m:
        raise LevelError(f"cannot boost from level {m} to level {n}: {m} does not divide {n}")
    total = IntMatrix.zeros(pair.r, pair.r)
    for ell in range(n // m):
        total = total + _power(pair.G, n - (ell + 1) * m) @ _power(pair.F, ell * m)
    return BoostMap(pair, m, n, total)


def canonicalize(S: ReidSet, v: Sequence[int]) -> ReidClass:
    """Canonical class of v + A_n Z^r."""
    if len(v) != S.pair.r:
        raise ValueError(f"vector {tuple(v)} is not in Z^{S.pair.r}")
    w = S.snf.U.apply(v)
    coords = tuple(x % d if d else x for x, d in zip(w, S.snf.factors))
    return S._from_coords(coords)


def boost_class(B: BoostMap, c: ReidClass, target: ReidSet) -> ReidClass:
    if c.level != B.from_level or target.level != B.to_level:
        raise LevelError(
            f"boost {B.from_level}->{B.to_level} applied to a level-{c.level} class "
            f"with a level-{target.level} target"
        )
    return canonicalize(target, B.matrix.apply(c.rep))


def image_subgroup(B: BoostMap, target: ReidSet) -> Lattice:
    """Preimage in Z^r of the image of the boost: B Z^r + A_n Z^r."""
    if target.level != B.to_level:
        raise LevelError("target level does not match the boost")
    return lattice_from_columns(B.matrix.hstack(target.relation))


def subgroup_order(L: Lattice, target: ReidSet) -> int:
    """Order of the subgroup L / A_n Z^r inside a finite Reidemeister set."""
    if target.order is None:
        raise InfiniteReidemeisterError("subgroup orders need a finite target")
    return target.order // lattice_index(L)


def _quotient_reps(big: Lattice, small: IntMatrix) -> Iterator[Vector]:
    """Representatives of big / (small Z^r), where small Z^r is a full-rank sublattice of big."""
    H = big.basis
    r = H.nrows
    # coordinates of the columns of `small` in the Hermite basis of `big`
    coord_cols = []
    for col in small.columns():
        sol = solve_linear(H, col)
        if sol is None:
            raise ArithmeticError("sublattice generator outside the lattice")
        coord_cols.append(sol[0])
    M = IntMatrix.from_columns(coord_cols, r)
    dec = snf(M)
    Ui = unimodular_inverse(dec.U)
    for t in box(dec.factors):
        yield H.apply(Ui.apply(t))


def preimage_classes(B: BoostMap, c: ReidClass, source: ReidSet) -> set[ReidClass]:
    """Every level-m class that boosts onto c.  Empty means c is irreducible via B."""
    if source.order is None:
        raise InfiniteReidemeisterError("preimages need a finite source Reidemeister set")
    if source.level != B.from_level or c.level != B.to_level:
        raise LevelError("levels of source, class and boost do not line up")
    r = B.pair.r
    A_n = B.pair.relation(B.to_level)
    sol = solve_linear(B.matrix.hstack(A_n), c.rep)
    if sol is None:
        return set()
    particular, kernel = sol
    x0 = particular[:r]
    ker_gens = [col[:r] for col in kernel.columns()]
    K = lattice_from_columns(ker_gens + source.relation.columns(), r, full_rank=True)
    return {
        canonicalize(source, [a + b for a, b in zip(x0, x)])
        for x in _quotient_reps(K, source.relation)
    }


def injective_on_boosts(pair: TorusPair, m: int, n: int) -> tuple[bool, str]:
    """Whether the boost m -> n is injective on classes, with the reason.

    Tags: "coin_trivial" (det A_n != 0, so the coincidence subgroup at
    level n vanishes), "kernel_trivial" / "kernel_nontrivial" (counted
    preimages of zero on a finite source), "infinite_source" (undecided).
    """
    B = boost_map(pair, m, n)
    if det(pair.relation(n)) != 0:
        return True, "coin_trivial"
    source = reid_set(pair, m)
    if source.order is None:
        return False, "infinite_source"
    fibre = preimage_classes(B, reid_set(pair, n).zero(), source)
    return (len(fibre) == 1, "kernel_trivial" if len(fibre) == 1 else "kernel_nontrivial")
