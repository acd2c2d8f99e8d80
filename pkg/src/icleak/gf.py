"""Exact dense linear algebra over prime fields GF(q).

Matrices are immutable and store residues in ``[0, q)`` row-major.  Every
routine here is integer-only; no floating point is ever involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The prime field GF(q)."""

    q: int

    def __post_init__(self) -> None:
        if not isinstance(self.q, int) or not is_prime(self.q):
            raise ValueError(f"field order must be prime, got {self.q!r}")

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(q)")
        return pow(a, -1, self.q)

    def __int__(self) -> int:
        return self.q


@dataclass(frozen=True)
class MatrixGF:
    field: PrimeField
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )
        q = self.field.q
        for e in self.entries:
            if not 0 <= e < q:
                raise ValueError(f"entry {e} outside [0, {q})")

    @classmethod
    def from_rows(cls, q: int | PrimeField, rows: Sequence[Sequence[int]],
                  cols: int | None = None) -> "MatrixGF":
        """Build a matrix from nested rows, reducing every entry mod q.

        ``cols`` is only needed for 0-row matrices.
        """
        field = q if isinstance(q, PrimeField) else PrimeField(q)
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        flat = tuple(int(x) % field.q for r in rows for x in r)
        return cls(field, len(rows), cols, flat)

    @classmethod
    def zeros(cls, q: int | PrimeField, rows: int, cols: int) -> "MatrixGF":
        field = q if isinstance(q, PrimeField) else PrimeField(q)
        return cls(field, rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, q: int | PrimeField, n: int) -> "MatrixGF":
        return cls.from_rows(q, [[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @property
    def q(self) -> int:
        return self.field.q

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "MatrixGF":
        t = [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)]
        return MatrixGF(self.field, self.cols, self.rows, tuple(t))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    @cached_property
    def rank(self) -> int:
        return rank(self)

    def __repr__(self) -> str:
        return f"MatrixGF(q={self.q}, {self.to_rows()!r})"


def _echelon(rows: list[list[int]], q: int) -> tuple[list[list[int]], list[int]]:
    """Row-reduce ``rows`` in place; return (rows, pivot columns)."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = pow(rows[r][c], -1, q)
        pivot_row = [(x * inv) % q for x in rows[r]]
        rows[r] = pivot_row
        for i in range(r + 1, nrows):
            f = rows[i][c]
            if f:
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(m: MatrixGF) -> int:
    """Rank of ``m`` over GF(q); 0 for empty matrices."""
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots = _echelon(m.to_rows(), m.q)
    return len(pivots)


def select_columns(m: MatrixGF, idx: Sequence[int]) -> MatrixGF:
    """Submatrix with the columns ``idx`` in the given order (0-based)."""
    idx = list(idx)
    for j in idx:
        if not 0 <= j < m.cols:
            raise IndexError(f"column {j} out of range for {m.cols} columns")
    flat = tuple(m.entries[i * m.cols + j] for i in range(m.rows) for j in idx)
    return MatrixGF(m.field, m.rows, len(idx), flat)


class _RowSpace:
    """Incremental echelon basis, used to test membership row by row."""

    def __init__(self, q: int, cols: int):
        self.q = q
        self.cols = cols
        self.basis: list[tuple[int, list[int]]] = []

    def reduce(self, v: Iterable[int]) -> list[int]:
        q = self.q
        v = [x % q for x in v]
        for piv, b in self.basis:
            f = v[piv]
            if f:
                v = [(a - f * c) % q for a, c in zip(v, b)]
        return v

    def add(self, v: Iterable[int]) -> bool:
        v = self.reduce(v)
        piv = next((j for j, x in enumerate(v) if x), None)
        if piv is None:
            return False
        inv = pow(v[piv], -1, self.q)
        self.basis.append((piv, [(x * inv) % self.q for x in v]))
        return True


def row_basis(m: MatrixGF) -> MatrixGF:
    """Rows of ``m`` forming the top-down greedy (lexicographically first) basis."""
    space = _RowSpace(m.q, m.cols)
    keep = [list(m.row(i)) for i in range(m.rows) if space.add(m.row(i))]
    return MatrixGF.from_rows(m.field, keep, cols=m.cols)


def in_row_space(m: MatrixGF, v: Sequence[int]) -> bool:
    if len(v) != m.cols:
        raise ValueError(f"vector length {len(v)} != matrix columns {m.cols}")
    space = _RowSpace(m.q, m.cols)
    for i in range(m.rows):
        space.add(m.row(i))
    return not any(space.reduce(v))


def matvec(m: MatrixGF, x: Sequence[int]) -> tuple[int, ...]:
    q = m.q
    return tuple(sum(a * b for a, b in zip(m.row(i), x)) % q for i in range(m.rows))
