"""Exact integer and rational matrix algebra.

Integers are plain Python ints and rationals are `fractions.Fraction`, so
every result is exact; no floating point appears anywhere in this module.
Matrices are immutable, hashable value types and all operations are pure
functions, safe to share across threads and to memoize.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

Scalar = Union[int, Fraction]

__all__ = [
    "IntMatrix",
    "RatMatrix",
    "NotSquareError",
    "NotUnimodularError",
    "smith_normal_form",
    "unimodular_inverse",
    "rational_rank",
    "rational_kernel",
]


class NotSquareError(ValueError):
    """A square matrix was required."""


class NotUnimodularError(ValueError):
    """An integer matrix with determinant +1 or -1 was required."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable matrix of arbitrary-precision integers, stored row-major."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows:
            raise ValueError("row count does not match entries")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged rows")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        grid = tuple(tuple(operator.index(e) for e in row) for row in rows)
        if cols is None:
            if not grid:
                raise ValueError("cannot infer column count of an empty matrix")
            cols = len(grid[0])
        return cls(len(grid), cols, grid)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        cols = len(columns)
        grid = tuple(
            tuple(operator.index(columns[j][i]) for j in range(cols)) for i in range(rows)
        )
        return cls(rows, cols, grid)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols, self.rows, tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols))
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("matrix shapes do not compose")
        grid = tuple(
            tuple(
                sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols))
                for j in range(other.cols)
            )
            for i in range(self.rows)
        )
        return IntMatrix(self.rows, other.cols, grid)

    def to_rational(self) -> "RatMatrix":
        return RatMatrix(
            self.rows, self.cols, tuple(tuple(Fraction(e) for e in row) for row in self.entries)
        )

    def det(self) -> int:
        """Exact determinant by Bareiss fraction-free elimination."""
        if self.rows != self.cols:
            raise NotSquareError(f"{self.rows}x{self.cols} matrix has no determinant")
        n = self.rows
        if n == 0:
            return 1
        a = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and self.det() in (1, -1)


@dataclass(frozen=True)
class RatMatrix:
    """Immutable matrix of `Fraction` entries (always in lowest terms)."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows:
            raise ValueError("row count does not match entries")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged rows")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], cols: int | None = None) -> "RatMatrix":
        grid = tuple(tuple(Fraction(e) for e in row) for row in rows)
        if cols is None:
            if not grid:
                raise ValueError("cannot infer column count of an empty matrix")
            cols = len(grid[0])
        return cls(len(grid), cols, grid)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "RatMatrix":
        z = Fraction(0)
        return cls(rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            self.cols, self.rows, tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols))
        )

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("matrix shapes do not compose")
        grid = tuple(
            tuple(
                sum((self.entries[i][k] * other.entries[k][j] for k in range(self.cols)), Fraction(0))
                for j in range(other.cols)
            )
            for i in range(self.rows)
        )
        return RatMatrix(self.rows, other.cols, grid)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "RatMatrix":
        grid = tuple(tuple(self.entries[i][j] for j in col_idx) for i in row_idx)
        return RatMatrix(len(row_idx), len(col_idx), grid)

    def is_antisymmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            self.entries[i][j] == -self.entries[j][i]
            for i in range(self.rows)
            for j in range(i, self.cols)
        )

    def is_zero(self) -> bool:
        return all(e == 0 for row in self.entries for e in row)


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form with transforms: returns (u, d, v) with d = u @ m @ v.

    u and v are unimodular, d is diagonal with nonnegative entries satisfying
    d[0] | d[1] | ... , zeros trailing. Pivots are chosen by minimal absolute
    value with row-major tie-breaking, so the output is reproducible.
    """
    nr, nc = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    while t < min(nr, nc):
        pi = pj = -1
        best = 0
        for i in range(t, nr):
            for j in range(t, nc):
                e = abs(a[i][j])
                if e and (best == 0 or e < best):
                    pi, pj, best = i, j, e
        if best == 0:
            break
        swap_rows(t, pi)
        swap_cols(t, pj)
        # Clear row t and column t. Floor division leaves remainders strictly
        # smaller than the pivot, so re-running the pivot search terminates.
        dirty = False
        for i in range(t + 1, nr):
            if a[i][t]:
                add_row(i, t, -(a[i][t] // a[t][t]))
                dirty = dirty or a[i][t] != 0
        for j in range(t + 1, nc):
            if a[t][j]:
                add_col(j, t, -(a[t][j] // a[t][t]))
                dirty = dirty or a[t][j] != 0
        if dirty:
            continue
        # Enforce the divisibility chain: pull a non-multiple into row t,
        # which the next pass grinds down to gcd(pivot, entry).
        p = a[t][t]
        stuck = next(
            ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
            None,
        )
        if stuck is not None:
            add_row(t, stuck[0], 1)
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    return (
        IntMatrix.from_rows(u, nr),
        IntMatrix.from_rows(a, nc),
        IntMatrix.from_rows(v, nc),
    )


def unimodular_inverse(r: IntMatrix) -> IntMatrix:
    """Integer inverse of a matrix with determinant +1 or -1.

    Raises NotSquareError / NotUnimodularError when the input does not
    qualify; otherwise r @ s == s @ r == identity exactly.
    """
    if r.rows != r.cols:
        raise NotSquareError(f"{r.rows}x{r.cols} matrix is not invertible over the integers")
    d = r.det()
    if d not in (1, -1):
        raise NotUnimodularError(f"determinant is {d}, expected +1 or -1")
    n = r.rows
    aug = [
        [Fraction(e) for e in r.entries[i]] + [Fraction(int(i == j)) for j in range(n)]
        for i in range(n)
    ]
    _rref(aug)
    grid = []
    for i in range(n):
        row = []
        for j in range(n):
            e = aug[i][n + j]
            if e.denominator != 1:  # impossible for |det| = 1
                raise NotUnimodularError("inverse is not integral")
            row.append(int(e))
        grid.append(tuple(row))
    return IntMatrix(n, n, tuple(grid))


def rational_rank(m: RatMatrix | IntMatrix) -> int:
    """Exact rank over the rationals by Gaussian elimination."""
    if isinstance(m, IntMatrix):
        m = m.to_rational()
    grid = [list(row) for row in m.entries]
    return len(_rref(grid))


def rational_kernel(m: RatMatrix | IntMatrix) -> tuple[tuple[Fraction, ...], ...]:
    """Basis of the right kernel {x : m @ x = 0}, as a tuple of vectors."""
    if isinstance(m, IntMatrix):
        m = m.to_rational()
    grid = [list(row) for row in m.entries]
    pivots = _rref(grid)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * m.cols
        vec[free] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -grid[r][free]
        basis.append(tuple(vec))
    return tuple(basis)


def _rref(grid: list[list[Fraction]]) -> list[int]:
    """In-place reduced row echelon form; returns the pivot columns."""
    nr = len(grid)
    nc = len(grid[0]) if nr else 0
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if grid[i][c] != 0), None)
        if pr is None:
            continue
        grid[r], grid[pr] = grid[pr], grid[r]
        inv = 1 / grid[r][c]
        grid[r] = [x * inv for x in grid[r]]
        for i in range(nr):
            if i != r and grid[i][c] != 0:
                f = grid[i][c]
                grid[i] = [x - f * y for x, y in zip(grid[i], grid[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return pivots
