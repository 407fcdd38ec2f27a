"""Exact membership of a polynomial row in the pointwise span of a frame.

A section lies in the pointwise span of a rank-r polynomial frame everywhere
(on the locus where the frame keeps rank r) iff all (r+1)-minors of the
stacked matrix are zero polynomials.  Before enumerating minors we peel off
pivots that are nonzero constants: adding polynomial multiples of rows and
deleting a constant-pivot row/column preserves the rank at every point, and
on structured frames this usually reduces the bracket row to zero outright.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .scalars import Polynomial


def poly_det(rows: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Determinant of a square polynomial matrix by sparse cofactor expansion."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty determinant")
    vars_ = rows[0][0].vars
    zero = Polynomial.zero(vars_)

    def rec(row_idx: tuple, col_idx: tuple) -> Polynomial:
        k = len(row_idx)
        if k == 1:
            return rows[row_idx[0]][col_idx[0]]
        # expand along the column with the most zero entries
        best_col, best_zeros = None, -1
        for cpos, c in enumerate(col_idx):
            zeros = sum(1 for r in row_idx if rows[r][c].is_zero())
            if zeros > best_zeros:
                best_col, best_zeros = cpos, zeros
        if best_zeros == k:
            return zero
        c = col_idx[best_col]
        rest_cols = col_idx[:best_col] + col_idx[best_col + 1 :]
        total = zero
        for rpos, r in enumerate(row_idx):
            entry = rows[r][c]
            if entry.is_zero():
                continue
            minor = rec(row_idx[:rpos] + row_idx[rpos + 1 :], rest_cols)
            if minor.is_zero():
                continue
            term = entry * minor
            total = total + term if (rpos + best_col) % 2 == 0 else total - term
        return total

    if any(len(r) != n for r in rows):
        raise ValueError("non-square determinant")
    return rec(tuple(range(n)), tuple(range(n)))


def _constant_pivot_reduce(rows: list) -> list:
    """Unimodular reduction: repeatedly eliminate with nonzero-constant pivots.

    Returns the surviving rows (pivot rows and columns removed).  The rank at
    EVERY point drops by exactly the number of pivots removed, so span
    conditions transfer verbatim to the reduced matrix.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return rows
    ncols = len(rows[0])
    active_cols = list(range(ncols))
    while True:
        pivot = None
        for ri, row in enumerate(rows):
            for cpos, c in enumerate(active_cols):
                e = row[c]
                if not e.is_zero() and e.is_constant():
                    pivot = (ri, cpos)
                    break
            if pivot:
                break
        if pivot is None:
            break
        ri, cpos = pivot
        c = active_cols[cpos]
        pc = rows[ri][c].constant_value()
        for rj in range(len(rows)):
            if rj == ri:
                continue
            f = rows[rj][c]
            if f.is_zero():
                continue
            factor = f * (1 / pc)
            rows[rj] = [a - factor * b for a, b in zip(rows[rj], rows[ri])]
        del rows[ri]
        del active_cols[cpos]
    return [[row[c] for c in active_cols] for row in rows]


@dataclass(frozen=True)
class SpanWitness:
    """Certificate for a failed membership test: a nonzero minor."""

    minor: Polynomial
    columns: tuple

    def __str__(self):
        return f"nonzero minor on columns {self.columns}: {self.minor}"


def in_span(frame_rows: Sequence[Sequence[Polynomial]], candidate: Sequence[Polynomial]):
    """Whether candidate(x) lies in span{frame_rows(x)} for every point x
    where the frame has full rank.

    Returns (True, None) or (False, SpanWitness).
    """
    frame_rows = [tuple(r) for r in frame_rows]
    stacked = frame_rows + [tuple(candidate)]
    k = len(frame_rows)
    ncols = len(candidate)
    if k == 0:
        for j, e in enumerate(candidate):
            if not e.is_zero():
                return False, SpanWitness(e, (j,))
        return True, None

    reduced = _constant_pivot_reduce(stacked)
    size = len(reduced)
    if size == 0:
        # every row was eliminated by constant pivots: pointwise rank k+1
        witness = _some_nonzero_minor(stacked, k + 1)
        return False, witness
    if any(all(e.is_zero() for e in row) for row in reduced):
        return True, None
    width = len(reduced[0])
    if width < size:
        return True, None  # rank can never reach the row count
    for cols in combinations(range(width), size):
        minor = poly_det([[row[c] for c in cols] for row in reduced])
        if not minor.is_zero():
            # report a certificate computed on the original matrix
            witness = _some_nonzero_minor(stacked, k + 1)
            if witness is None:
                witness = SpanWitness(minor, cols)
            return False, witness
    return True, None


def _some_nonzero_minor(rows, size):
    width = len(rows[0])
    if size > len(rows) or size > width:
        return None
    row_sets = combinations(range(len(rows)), size) if len(rows) != size else [tuple(range(size))]
    for rset in row_sets:
        for cols in combinations(range(width), size):
            minor = poly_det([[rows[r][c] for c in cols] for r in rset])
            if not minor.is_zero():
                return SpanWitness(minor, cols)
    return None


def pointwise_rank(rows: Sequence[Sequence[Polynomial]], point) -> int:
    from .linalg import Matrix

    return Matrix([[e.eval(point) for e in row] for row in rows]).rank()
