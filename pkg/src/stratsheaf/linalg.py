"""Exact linear algebra over the rationals.

Matrices are small (tens of rows), so plain Gaussian elimination over
:class:`fractions.Fraction` is both fast enough and exact. Column vectors
convention: a matrix of shape (m, n) maps Q^n -> Q^m.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Mat:
    rows: int
    cols: int
    data: tuple  # tuple of row tuples of Fraction

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError(f"ragged matrix data for shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        data = tuple(tuple(Fraction(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols, tuple((ZERO,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ot = other.transpose().data
        return Mat(self.rows, other.cols,
                   tuple(tuple(sum((a * b for a, b in zip(r, c)), ZERO) for c in ot)
                         for r in self.data))

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return Mat(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: "Mat") -> "Mat":
        return self + other.scale(-1)

    def scale(self, c) -> "Mat":
        c = Fraction(c)
        return Mat(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.data))

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows, tuple(zip(*self.data)) if self.rows else
                   tuple(() for _ in range(self.cols)))

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def select_rows(self, idx: Iterable[int]) -> "Mat":
        idx = list(idx)
        return Mat(len(idx), self.cols, tuple(self.data[i] for i in idx))

    def select_cols(self, idx: Iterable[int]) -> "Mat":
        idx = list(idx)
        return Mat(self.rows, len(idx), tuple(tuple(r[j] for j in idx) for r in self.data))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.data for a in r)

    def to_strings(self):
        from .labels import frac_str
        return [[frac_str(a) for a in r] for r in self.data]


def vstack(blocks: Sequence[Mat], cols: int) -> Mat:
    data = []
    for b in blocks:
        if b.cols != cols:
            raise ValueError("vstack column mismatch")
        data.extend(b.data)
    return Mat(len(data), cols, tuple(data))


def hstack(blocks: Sequence[Mat], rows: int) -> Mat:
    for b in blocks:
        if b.rows != rows:
            raise ValueError("hstack row mismatch")
    data = tuple(tuple(a for b in blocks for a in b.data[i]) for i in range(rows))
    return Mat(rows, sum(b.cols for b in blocks), data)


def block_diag(blocks: Sequence[Mat]) -> Mat:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    data = []
    off = 0
    for b in blocks:
        for r in b.data:
            data.append((ZERO,) * off + r + (ZERO,) * (cols - off - b.cols))
        off += b.cols
    return Mat(rows, cols, tuple(data))


def rref(m: Mat):
    """Reduced row echelon form; pivots chosen left to right, top to bottom.

    Returns (reduced matrix, pivot column list).
    """
    a = [list(r) for r in m.data]
    pivots = []
    r = 0
    for c in range(m.cols):
        p = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = ONE / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return Mat(m.rows, m.cols, tuple(tuple(x) for x in a)), pivots


def rank(m: Mat) -> int:
    return len(rref(m)[1])


def kernel(m: Mat) -> Mat:
    """Basis of the null space as the columns of an (m.cols x k) matrix.

    One basis vector per free column, with a 1 in that free slot; this is
    the canonical basis determined by the reduced row echelon form.
    """
    red, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    cols = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -red[i, f]
        cols.append(v)
    return Mat(m.cols, len(cols), tuple(tuple(v[i] for v in cols) for i in range(m.cols)))


def solve(a: Mat, b: Mat) -> Mat | None:
    """Return x with a @ x == b, or None when no solution exists.

    When a has full column rank the solution is unique.
    """
    if a.rows != b.rows:
        raise ValueError("solve: row mismatch")
    aug = hstack([a, b], a.rows)
    red, pivots = rref(aug)
    if any(p >= a.cols for p in pivots):
        return None
    x = [[ZERO] * b.cols for _ in range(a.cols)]
    for i, pc in enumerate(pivots):
        for j in range(b.cols):
            x[pc][j] = red[i, a.cols + j]
    return Mat(a.cols, b.cols, tuple(tuple(r) for r in x))


def inverse(m: Mat) -> Mat | None:
    if m.rows != m.cols:
        return None
    if rank(m) != m.rows:
        return None
    return solve(m, Mat.identity(m.rows))


def column_space_basis(m: Mat) -> Mat:
    """Pivot columns of m (a basis of its image, in original coordinates)."""
    _, pivots = rref(m)
    return m.select_cols(pivots)
