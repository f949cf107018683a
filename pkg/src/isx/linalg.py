"""Exact dense linear algebra over the rationals.

Everything here works on :class:`Matrix`, an immutable row-major table of
``fractions.Fraction``.  Vectors are column matrices and maps act by left
multiplication, so ``g o f`` is ``G @ F``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if not _RATIONAL.match(x):
            raise ValueError(f"not a rational literal: {x!r}")
        value = Fraction(x.replace(" ", ""))
        return value
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Matrix:
    """Immutable dense rational matrix."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Sequence] = (), rows: int | None = None, cols: int | None = None):
        table = tuple(tuple(to_fraction(x) for x in row) for row in data)
        if rows is None:
            rows = len(table)
        if cols is None:
            cols = len(table[0]) if table else 0
        if len(table) != rows or any(len(r) != cols for r in table):
            raise ValueError(f"ragged or mis-sized matrix data for shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self._data = table

    @classmethod
    def _raw(cls, table: tuple, rows: int, cols: int) -> "Matrix":
        m = object.__new__(cls)
        m.rows, m.cols, m._data = rows, cols, table
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        zero = Fraction(0)
        return cls._raw(tuple((zero,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = [tuple(to_fraction(x) for x in c) for c in columns]
        if any(len(c) != rows for c in cols):
            raise ValueError("column length mismatch")
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(rows)), rows, len(cols))

    @classmethod
    def column(cls, values: Sequence) -> "Matrix":
        return cls([[v] for v in values], rows=len(values), cols=1)

    @classmethod
    def diagonal(cls, values: Sequence) -> "Matrix":
        n = len(values)
        m = [[0] * n for _ in range(n)]
        for i, v in enumerate(values):
            m[i][i] = v
        return cls(m, n, n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    @property
    def T(self) -> "Matrix":
        if not (self.rows and self.cols):
            return Matrix.zeros(self.cols, self.rows)
        return Matrix._raw(tuple(zip(*self._data)), self.cols, self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        zero = Fraction(0)
        ocols = list(zip(*other._data)) if other.rows else [()] * other.cols
        out = []
        for r in self._data:
            nz = [(k, x) for k, x in enumerate(r) if x]
            out.append(tuple(sum((x * c[k] for k, x in nz), zero) for c in ocols))
        return Matrix._raw(tuple(out), self.rows, other.cols)

    def _check_same(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
                           self.rows, self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
                           self.rows, self.cols)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = to_fraction(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self._data), self.rows, self.cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._raw(tuple(tuple(r[j] for j in idx) for r in self._data), self.rows, len(idx))

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._raw(tuple(self._data[i] for i in idx), len(idx), self.cols)

    def with_entry(self, i: int, j: int, value) -> "Matrix":
        table = [list(r) for r in self._data]
        table[i][j] = to_fraction(value)
        return Matrix._raw(tuple(tuple(r) for r in table), self.rows, self.cols)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_fraction(x) for x in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def hstack(*blocks: Matrix, rows: int | None = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(rows or 0, 0)
    n = blocks[0].rows
    if any(b.rows != n for b in blocks):
        raise ValueError("hstack row mismatch")
    table = tuple(sum((b._data[i] for b in blocks), ()) for i in range(n))
    return Matrix._raw(table, n, sum(b.cols for b in blocks))


def vstack(*blocks: Matrix, cols: int | None = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(0, cols or 0)
    n = blocks[0].cols
    if any(b.cols != n for b in blocks):
        raise ValueError("vstack column mismatch")
    return Matrix._raw(sum((b._data for b in blocks), ()), sum(b.rows for b in blocks), n)


def block_diagonal(*blocks: Matrix) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[Fraction(0)] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            out[r0 + i][c0:c0 + b.cols] = b._data[i]
        r0 += b.rows
        c0 += b.cols
    return Matrix._raw(tuple(tuple(r) for r in out), rows, cols)


def row_reduce(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row echelon form, pivot columns and rank."""
    a = [list(r) for r in m._data]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        p = next((i for i in range(r, m.rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv if x else x for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return Matrix._raw(tuple(tuple(row) for row in a), m.rows, m.cols), pivots, len(pivots)


def rank(m: Matrix) -> int:
    return row_reduce(m)[2]


@dataclass(frozen=True)
class Subspace:
    """Span of the (independent) columns of ``basis`` inside k^ambient_dim."""

    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_dim:
            raise ValueError("basis vectors must have ambient_dim entries")
        if rank(self.basis) != self.basis.cols:
            raise ValueError("basis columns are not independent")

    @property
    def dim(self) -> int:
        return self.basis.cols

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, Matrix.zeros(n, 0))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, Matrix.identity(n))

    @classmethod
    def span(cls, m: Matrix) -> "Subspace":
        """Subspace spanned by the columns of m (pivot columns kept)."""
        return cls(m.rows, m.select_columns(row_reduce(m)[1]))

    def contains(self, vectors: Matrix) -> bool:
        return rank(hstack(self.basis, vectors)) == self.dim

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.dim == other.dim and self <= other

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(hstack(self.basis, other.basis))

    def intersection(self, other: "Subspace") -> "Subspace":
        # x = B a = C b  <=>  [B | -C] (a, b) = 0
        k = kernel_basis(hstack(self.basis, -other.basis)).basis
        return Subspace.span(self.basis @ k.select_rows(range(self.dim)))

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.dim))


def kernel_basis(m: Matrix) -> Subspace:
    rref, pivots, _ = row_reduce(m)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    vecs = []
    for fj in free:
        v = [Fraction(0)] * m.cols
        v[fj] = Fraction(1)
        for r, pj in enumerate(pivots):
            v[pj] = -rref[r, fj]
        vecs.append(v)
    return Subspace(m.cols, Matrix.from_columns(vecs, m.cols))


def image_basis(m: Matrix) -> Subspace:
    return Subspace.span(m)


def solve(m: Matrix, b: Matrix) -> Matrix | None:
    """Some x with m @ x == b, or None when the system is inconsistent."""
    if b.rows != m.rows:
        raise ValueError("right-hand side has wrong length")
    aug = hstack(m, b)
    rref, pivots, _ = row_reduce(aug)
    if any(p >= m.cols for p in pivots):
        return None
    x = [[Fraction(0)] * b.cols for _ in range(m.cols)]
    for r, pj in enumerate(pivots):
        for k in range(b.cols):
            x[pj][k] = rref[r, m.cols + k]
    return Matrix(x, m.cols, b.cols)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise ValueError("only square matrices are invertible")
    rref, pivots, _ = row_reduce(hstack(m, Matrix.identity(m.rows)))
    if pivots[:m.rows] != list(range(m.rows)):
        raise ValueError("matrix is singular")
    return Matrix._raw(tuple(row[m.cols:] for row in rref._data), m.rows, m.rows)


def is_invertible(m: Matrix) -> bool:
    return m.is_square and rank(m) == m.rows


def complement_basis(s: Subspace) -> Matrix:
    """Standard basis vectors completing ``s`` to a basis (pivot choice)."""
    _, pivots, _ = row_reduce(hstack(s.basis, Matrix.identity(s.ambient_dim)))
    picks = [p - s.dim for p in pivots if p >= s.dim]
    return Matrix.identity(s.ambient_dim).select_columns(picks)


@dataclass(frozen=True)
class Quotient:
    """Coordinates on V / S.

    ``proj`` kills S and ``section`` is a right inverse spanned by standard
    basis vectors, so ``proj @ section`` is the identity.
    """

    sub: Subspace
    proj: Matrix
    section: Matrix

    @property
    def dim(self) -> int:
        return self.proj.rows


def quotient(s: Subspace) -> Quotient:
    comp = complement_basis(s)
    full = inverse(hstack(s.basis, comp))
    proj = full.select_rows(range(s.dim, s.ambient_dim))
    return Quotient(s, proj, comp)


def left_inverse(m: Matrix) -> Matrix:
    """A matrix L with L @ m = I, for m of full column rank."""
    q = quotient(Subspace(m.rows, m))
    full = inverse(hstack(m, q.section))
    return full.select_rows(range(m.cols))


def subspace_annihilator(s: Subspace, pairing: Matrix) -> Subspace:
    """{y : x^T P y = 0 for every x in s}."""
    if pairing.rows != s.ambient_dim:
        raise ValueError(f"pairing has {pairing.rows} rows but subspace lives in dimension {s.ambient_dim}")
    return kernel_basis(s.basis.T @ pairing)


def symmetric_signature(g: Matrix) -> tuple[int, int, int]:
    """(n_plus, n_minus, n_zero) by congruence diagonalisation."""
    if not g.is_square or g != g.T:
        raise ValueError("signature needs a symmetric matrix")
    a = g.tolist()
    active = list(range(g.rows))
    plus = minus = 0
    while active:
        k = next((i for i in active if a[i][i]), None)
        if k is not None:
            p = a[k][k]
            if p > 0:
                plus += 1
            else:
                minus += 1
            active.remove(k)
            for i in active:
                if a[i][k]:
                    f = a[i][k] / p
                    for j in active:
                        a[i][j] -= f * a[k][j]
            continue
        pair = next(((i, j) for i in active for j in active if i < j and a[i][j]), None)
        if pair is None:
            break
        # hyperbolic plane [[0, c], [c, 0]]: one positive and one negative square
        i, j = pair
        c = a[i][j]
        plus += 1
        minus += 1
        active.remove(i)
        active.remove(j)
        for x in active:
            for y in active:
                a[x][y] -= (a[x][i] * a[j][y] + a[x][j] * a[i][y]) / c
    return plus, minus, g.rows - plus - minus


def signature(g: Matrix) -> int:
    p, m, _ = symmetric_signature(g)
    return p - m
