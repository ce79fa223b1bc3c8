"""Exact Gaussian elimination over Q / Q(sqrt(D))."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _copy(rows):
    return [[c if not isinstance(c, int) else Fraction(c) for c in row] for row in rows]


def det(matrix: Sequence[Sequence]):
    """Determinant by exact elimination with first-nonzero pivoting."""
    a = _copy(matrix)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        p = a[col][col]
        result = result * p
        inv = 1 / p
        for r in range(col + 1, n):
            f = a[r][col]
            if f == 0:
                continue
            f = f * inv
            row_r, row_c = a[r], a[col]
            for k in range(col + 1, n):
                if row_c[k] != 0:
                    row_r[k] = row_r[k] - f * row_c[k]
    return result


def rank(matrix: Sequence[Sequence]) -> int:
    return len(_echelon(_copy(matrix))[1])


def _echelon(a):
    """Reduced row echelon form in place; returns (a, pivot_columns)."""
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [c * inv for c in a[r]]
        for i in range(nrows):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return a, pivots


def linear_solve(A: Sequence[Sequence], b: Sequence) -> list | None:
    """Solve ``A x = b`` exactly.

    Returns one solution (free unknowns set to zero) when the system is
    consistent, otherwise None.  ``A`` may be rectangular.
    """
    if len(A) != len(b):
        raise ValueError("row count of A and length of b differ")
    if not A:
        return []
    ncols = len(A[0])
    aug = _copy([list(row) + [bi] for row, bi in zip(A, b)])
    aug, pivots = _echelon(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        x[col] = aug[r][ncols]
    return x


def is_consistent(A, b) -> bool:
    return linear_solve(A, b) is not None

