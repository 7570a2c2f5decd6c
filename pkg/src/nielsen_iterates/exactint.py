"""Exact integer linear algebra on small dense matrices.

Everything here works on Python ints, so there is no overflow at any size.
Matrices are immutable; all operations return new values.

>>> A = IntMatrix.from_rows([[2, 4], [6, 8]])
>>> snf(A).factors
(2, 4)
>>> det(A)
-8
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import RankDeficientError

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Dense matrix of unbounded integers, stored row-major as a tuple of rows."""

    entries: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        if any(len(row) != self.ncols for row in self.entries):
            raise ValueError("all rows must have the same length")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], ncols: int | None = None) -> IntMatrix:
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        if ncols is None:
            if not entries:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(entries[0])
        return cls(entries, ncols)

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], nrows: int) -> IntMatrix:
        cols = [tuple(int(x) for x in c) for c in columns]
        if any(len(c) != nrows for c in cols):
            raise ValueError(f"every column must have {nrows} entries")
        return cls(tuple(tuple(c[i] for c in cols) for i in range(nrows)), len(cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntMatrix:
        return cls(tuple((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def scalar(cls, c: int, n: int) -> IntMatrix:
        return cls(tuple(tuple(c if i == j else 0 for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(tuple(self.columns()), self.nrows)

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def _check_same_shape(self, other: IntMatrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: IntMatrix) -> IntMatrix:
        self._check_same_shape(other)
        return IntMatrix(
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.ncols,
        )

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        self._check_same_shape(other)
        return IntMatrix(
            tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.ncols,
        )

    def __neg__(self) -> IntMatrix:
        return IntMatrix(tuple(tuple(-x for x in r) for r in self.entries), self.ncols)

    def __mul__(self, c: int) -> IntMatrix:
        return IntMatrix(tuple(tuple(c * x for x in r) for r in self.entries), self.ncols)

    __rmul__ = __mul__

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        return IntMatrix(
            tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in cols) for r in self.entries),
            other.ncols,
        )

    def apply(self, v: Sequence[int]) -> Vector:
        """Matrix-vector product."""
        if len(v) != self.ncols:
            raise ValueError(f"vector of length {len(v)} does not fit {self.shape}")
        return tuple(sum(x * y for x, y in zip(r, v)) for r in self.entries)

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.nrows != other.nrows:
            raise ValueError("hstack needs equal row counts")
        return IntMatrix(
            tuple(r + s for r, s in zip(self.entries, other.entries)), self.ncols + other.ncols
        )

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.entries) + "]"


def det(A: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not A.is_square:
        raise ValueError(f"determinant of non-square {A.shape} matrix")
    n = A.nrows
    if n == 0:
        return 1
    M = A.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def mat_pow(A: IntMatrix, n: int) -> IntMatrix:
    """A**n by repeated squaring; A**0 is the identity."""
    if not A.is_square:
        raise ValueError("matrix power needs a square matrix")
    if n < 0:
        raise ValueError("negative powers are not supported; use unimodular_inverse")
    result = IntMatrix.identity(A.nrows)
    base = A
    while n:
        if n & 1:
            result = result @ base
        n >>= 1
        if n:
            base = base @ base
    return result


def adjugate(A: IntMatrix) -> IntMatrix:
    n = A.nrows
    if not A.is_square:
        raise ValueError("adjugate needs a square matrix")
    if n == 1:
        return IntMatrix.identity(1)

    def minor(i, j):
        return IntMatrix.from_rows(
            [[A[r, c] for c in range(n) if c != j] for r in range(n) if r != i], n - 1
        )

    cof = [[(-1) ** (i + j) * det(minor(i, j)) for j in range(n)] for i in range(n)]
    return IntMatrix.from_rows(cof, n).T


def unimodular_inverse(A: IntMatrix) -> IntMatrix:
    """Integer inverse of a matrix with determinant +-1, via the adjugate."""
    d = det(A)
    if d not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det = {d})")
    return adjugate(A) * d


@dataclass(frozen=True)
class SnfDecomposition:
    """U @ A @ V == D with U, V unimodular and D diagonal with d1 | d2 | ..."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.factors if d != 0)


def snf(A: IntMatrix) -> SnfDecomposition:
    """Smith normal form with transforms.

    Pivoting: smallest nonzero entry by absolute value, Euclidean reduction
    of its row and column, then a divisibility repair step.  Signs are
    fixed with column operations, so for a 1x1 input U is always [1].
    """
    r, c = A.shape
    M = A.tolist()
    U = IntMatrix.identity(r).tolist()
    V = IntMatrix.identity(c).tolist()

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        M[dst] = [x + k * y for x, y in zip(M[dst], M[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in M:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(r, c)):
        candidates = [(abs(M[i][j]), i, j) for i in range(t, r) for j in range(t, c) if M[i][j]]
        if not candidates:
            break
        _, pi, pj = min(candidates)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            clean = True
            for i in range(t + 1, r):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // M[t][t]))
                    if M[i][t]:
                        swap_rows(t, i)
                        clean = False
            for j in range(t + 1, c):
                if M[t][j]:
                    add_col(j, t, -(M[t][j] // M[t][t]))
                    if M[t][j]:
                        swap_cols(t, j)
                        clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if M[i][j] % M[t][t]), None
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if M[t][t] < 0:
            for row in M:
                row[t] = -row[t]
            for row in V:
                row[t] = -row[t]

    factors = tuple(M[i][i] for i in range(min(r, c)))
    return SnfDecomposition(
        IntMatrix.from_rows(U, r),
        IntMatrix.from_rows(M, c),
        IntMatrix.from_rows(V, c),
        factors,
    )


def _row_hnf(vectors: Iterable[Sequence[int]], dim: int) -> list[list[int]]:
    """Row-style Hermite normal form of the span of `vectors` in Z^dim.

    Returns echelon rows with positive pivots and entries above each pivot
    reduced into [0, pivot).
    """
    active = [list(v) for v in vectors if any(v)]
    basis: list[list[int]] = []
    pivots: list[int] = []
    for col in range(dim):
        while True:
            nz = [v for v in active if v[col]]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda v: abs(v[col]))
            for v in nz:
                if v is not p:
                    q = v[col] // p[col]
                    for k in range(dim):
                        v[k] -= q * p[k]
            active = [v for v in active if any(v)]
        nz = [v for v in active if v[col]]
        if not nz:
            continue
        p = nz[0]
        active.remove(p)
        if p[col] < 0:
            p[:] = [-x for x in p]
        for b in basis:
            q = b[col] // p[col]
            if q:
                for k in range(dim):
                    b[k] -= q * p[k]
        basis.append(p)
        pivots.append(col)
    return basis


@dataclass(frozen=True)
class Lattice:
    """Sublattice of Z^r given by a column Hermite basis.

    The basis is lower triangular (one column per pivot), with positive
    pivots and entries left of each pivot reduced modulo it.  Two lattices
    are equal exactly when their bases are identical.
    """

    ambient_rank: int
    basis: IntMatrix

    @property
    def rank(self) -> int:
        return self.basis.ncols

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.ambient_rank

    def generators(self) -> list[Vector]:
        return self.basis.columns()

    def contains(self, v: Sequence[int]) -> bool:
        return _triangular_coords(self, v) is not None

    def __le__(self, other: Lattice) -> bool:
        """Sublattice test."""
        return all(other.contains(g) for g in self.generators())


def lattice_from_columns(
    cols: IntMatrix | Iterable[Sequence[int]], ambient_rank: int | None = None, *, full_rank: bool = False
) -> Lattice:
    """Canonical basis of the column span.  With full_rank=True a rank-deficient span raises."""
    if isinstance(cols, IntMatrix):
        ambient_rank = cols.nrows if ambient_rank is None else ambient_rank
        if cols.nrows != ambient_rank:
            raise ValueError(f"columns live in Z^{cols.nrows}, not Z^{ambient_rank}")
        vectors = cols.columns()
    else:
        vectors = [tuple(v) for v in cols]
        if ambient_rank is None:
            raise ValueError("ambient_rank is required for a bare list of columns")
        if any(len(v) != ambient_rank for v in vectors):
            raise ValueError(f"every generator must lie in Z^{ambient_rank}")
    rows = _row_hnf(vectors, ambient_rank)
    if full_rank and len(rows) < ambient_rank:
        raise RankDeficientError(f"span has rank {len(rows)} < {ambient_rank}")
    return Lattice(ambient_rank, IntMatrix.from_columns(rows, ambient_rank))


def _triangular_coords(L: Lattice, v: Sequence[int]) -> Vector | None:
    """Coordinates of v in the Hermite basis of L, or None if v is not in L."""
    v = list(v)
    coords = []
    for j, g in enumerate(L.generators()):
        piv = next(i for i, x in enumerate(g) if x)
        if any(v[i] for i in range(piv)):
            return None
        q, rem = divmod(v[piv], g[piv])
        if rem:
            return None
        coords.append(q)
        v = [x - q * y for x, y in zip(v, g)]
    return tuple(coords) if not any(v) else None


def lattice_index(L: Lattice) -> int:
    """[Z^r : L] for a full-rank lattice."""
    if not L.is_full_rank:
        raise RankDeficientError("index of a rank-deficient lattice is infinite")
    out = 1
    for j in range(L.rank):
        out *= L.basis[j, j]
    return out


def lattice_intersect(L1: Lattice, L2: Lattice) -> Lattice:
    """L1 ∩ L2, from the kernel of [B1 | -B2]."""
    if L1.ambient_rank != L2.ambient_rank:
        raise ValueError("lattices live in different ambient ranks")
    r = L1.ambient_rank
    if L1.rank == 0 or L2.rank == 0:
        return lattice_from_columns([], r)
    B1, B2 = L1.basis, L2.basis
    dec = snf(B1.hstack(-B2))
    k1 = B1.ncols
    gens = []
    for j in range(dec.rank, dec.V.ncols):
        u = dec.V.column(j)[:k1]
        gens.append(B1.apply(u))
    return lattice_from_columns(gens, r)


def solve_linear(A: IntMatrix, b: Sequence[int]) -> tuple[Vector, IntMatrix] | None:
    """All integer solutions of A x = b, as (particular, kernel basis columns).

    Returns None when there is no integer solution.

    >>> solve_linear(IntMatrix.from_rows([[8, 32]]), (4,)) is None
    True
    """
    if len(b) != A.nrows:
        raise ValueError("right-hand side has the wrong length")
    dec = snf(A)
    c = dec.U.apply(b)
    y = [0] * A.ncols
    for i, ci in enumerate(c):
        d = dec.factors[i] if i < len(dec.factors) else 0
        if d == 0:
            if ci:
                return None
            continue
        q, rem = divmod(ci, d)
        if rem:
            return None
        y[i] = q
    x = dec.V.apply(y)
    kernel = IntMatrix.from_columns(
        [dec.V.column(j) for j in range(dec.rank, A.ncols)], A.ncols
    )
    return x, kernel


def box(moduli: Sequence[int]) -> Iterator[Vector]:
    """All integer vectors t with 0 <= t_i < moduli[i]."""
    return product(*(range(m) for m in moduli))
