"""Bit-packed GF(2) vectors and matrices.

Vectors are plain Python integers used as bit sets: bit ``j`` of the int is
coordinate ``j``.  Arbitrary-precision ints give word-packed XOR/AND and
popcount (``int.bit_count``) for free, so every elimination routine here
operates on whole rows at a time.  Matrices are immutable; elimination always
works on copies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


def weight(v: int) -> int:
    """Hamming weight of a packed vector."""
    return v.bit_count()


def vector_from_bits(bits: Sequence[int]) -> int:
    """Pack a 0/1 sequence into an int, coordinate 0 first."""
    out = 0
    for j, b in enumerate(bits):
        if b & 1:
            out |= 1 << j
    return out


def bits_of(v: int, n: int) -> list[int]:
    """Unpack the first n coordinates of a packed vector."""
    return [(v >> j) & 1 for j in range(n)]


def support(v: int) -> list[int]:
    """Indices of the set bits, ascending."""
    out = []
    while v:
        lsb = v & -v
        out.append(lsb.bit_length() - 1)
        v ^= lsb
    return out


@dataclass(frozen=True)
class BitMatrix:
    """Row-major packed GF(2) matrix: ``rows[i]`` bit ``j`` is entry (i, j)."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self) -> None:
        if self.ncols < 0:
            raise ValueError("ncols must be non-negative")
        mask = (1 << self.ncols) - 1
        for i, r in enumerate(self.rows):
            if r & ~mask:
                raise ValueError(f"row {i} has bits beyond column {self.ncols - 1}")

    @classmethod
    def from_rows(cls, rows: Iterable[int], ncols: int) -> "BitMatrix":
        return cls(tuple(rows), ncols)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> "BitMatrix":
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(tuple(vector_from_bits(r) for r in rows), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def to_dense(self) -> list[list[int]]:
        return [bits_of(r, self.ncols) for r in self.rows]

    def transpose(self) -> "BitMatrix":
        cols = []
        for j in range(self.ncols):
            c = 0
            for i, r in enumerate(self.rows):
                c |= ((r >> j) & 1) << i
            cols.append(c)
        return BitMatrix(tuple(cols), self.nrows)

    def mul_vec(self, v: int) -> int:
        """Matrix-vector product M v, the packed syndrome of v."""
        s = 0
        for i, r in enumerate(self.rows):
            s |= ((r & v).bit_count() & 1) << i
        return s


def _echelon(rows: Sequence[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form with deterministic column order.

    Returns (pivot_cols, reduced_rows); reduced_rows keeps the original row
    count, with pivot rows first in pivot-column order and zero rows last.
    """
    work = list(rows)
    pivot_cols: list[int] = []
    pivot_row = 0
    for col in range(ncols):
        bit = 1 << col
        pivot = None
        for r in range(pivot_row, len(work)):
            if work[r] & bit:
                pivot = r
                break
        if pivot is None:
            continue
        work[pivot_row], work[pivot] = work[pivot], work[pivot_row]
        for r in range(len(work)):
            if r != pivot_row and (work[r] & bit):
                work[r] ^= work[pivot_row]
        pivot_cols.append(col)
        pivot_row += 1
        if pivot_row == len(work):
            break
    return pivot_cols, work


def rank(m: BitMatrix) -> int:
    pivots, _ = _echelon(m.rows, m.ncols)
    return len(pivots)


def rank_and_bases(m: BitMatrix) -> tuple[int, BitMatrix, BitMatrix]:
    """Rank, a row-space basis, and a kernel basis of m.

    The row basis is the nonzero part of the reduced echelon form; the kernel
    basis has one row per free column, in ascending column order, so both are
    deterministic.  rank + kernel rows == ncols always holds.
    """
    pivots, work = _echelon(m.rows, m.ncols)
    r = len(pivots)
    row_basis = BitMatrix(tuple(work[:r]), m.ncols)
    free_cols = [c for c in range(m.ncols) if c not in set(pivots)]
    kernel_rows = []
    for f in free_cols:
        v = 1 << f
        for i, p in enumerate(pivots):
            if (work[i] >> f) & 1:
                v |= 1 << p
        kernel_rows.append(v)
    kernel = BitMatrix(tuple(kernel_rows), m.ncols)
    return r, row_basis, kernel


def kernel_basis(m: BitMatrix) -> BitMatrix:
    return rank_and_bases(m)[2]


def solve(m: BitMatrix, s: int) -> Optional[int]:
    """One solution x of M x = s, or None when the system is inconsistent.

    s is a packed vector of length m.nrows.  The returned solution is the one
    with zeros on all free columns.
    """
    if s & ~((1 << m.nrows) - 1 if m.nrows else 0):
        raise ValueError("syndrome has bits beyond the row count")
    aug_col = 1 << m.ncols
    work = [row | (aug_col if (s >> i) & 1 else 0) for i, row in enumerate(m.rows)]
    pivot_cols: list[int] = []
    pivot_row = 0
    for col in range(m.ncols):
        bit = 1 << col
        pivot = None
        for r in range(pivot_row, len(work)):
            if work[r] & bit:
                pivot = r
                break
        if pivot is None:
            continue
        work[pivot_row], work[pivot] = work[pivot], work[pivot_row]
        for r in range(len(work)):
            if r != pivot_row and (work[r] & bit):
                work[r] ^= work[pivot_row]
        pivot_cols.append(col)
        pivot_row += 1
        if pivot_row == len(work):
            break
    for r in range(pivot_row, len(work)):
        if work[r]:  # zero row with nonzero right-hand side
            return None
    x = 0
    for i, p in enumerate(pivot_cols):
        if work[i] & aug_col:
            x |= 1 << p
    return x


def dual_basis(gen: BitMatrix) -> BitMatrix:
    """Basis of the dual code of the code generated by the rows of gen.

    The dual is the kernel of gen as a map x -> gen x, so
    dim(code) + dim(dual) == ncols and every returned row is orthogonal to
    every generator row.
    """
    return kernel_basis(gen)


def is_orthogonal(a: BitMatrix, b: BitMatrix) -> bool:
    """True iff A B^T == 0 bit-exactly."""
    if a.ncols != b.ncols:
        raise ValueError("column counts differ")
    return all((ra & rb).bit_count() % 2 == 0 for ra in a.rows for rb in b.rows)


class RowSpace:
    """Membership oracle for the row space of a matrix.

    Keeps an echelon basis; ``contains`` reduces the query vector against it,
    which is the rank-augmentation test without re-running elimination.
    """

    def __init__(self, m: BitMatrix) -> None:
        pivots, work = _echelon(m.rows, m.ncols)
        self.ncols = m.ncols
        self._pivots = pivots
        self._rows = work[: len(pivots)]

    @property
    def dim(self) -> int:
        return len(self._pivots)

    def reduce(self, v: int) -> int:
        for p, row in zip(self._pivots, self._rows):
            if (v >> p) & 1:
                v ^= row
        return v

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0
