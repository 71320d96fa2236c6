"""Exact linear algebra over Q and Q(chi).

Entries are Fraction or Cyclotomic; both are field elements, so ordinary
Gaussian elimination with exact division is used throughout.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import Cyclotomic


def _inv(x):
    if isinstance(x, Cyclotomic):
        return x.inverse()
    return Fraction(1) / Fraction(x)


def rank(rows: list[list]) -> int:
    """Exact rank by Gaussian elimination; does not modify its input."""
    mat = [list(r) for r in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = _inv(mat[r][c])
        mat[r] = [inv * x for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    return r


def solve(A: list[list], b: list):
    """Solve A x = b exactly; A may be rectangular (consistency is enforced).

    Returns the unique solution when the column rank is full; raises
    ValueError on an inconsistent or underdetermined system.
    """
    m = len(A)
    if m == 0:
        return []
    n = len(A[0])
    aug = [list(row) + [rhs] for row, rhs in zip(A, b)]
    piv_cols = []
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, m):
            if aug[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = _inv(aug[r][c])
        aug[r] = [inv * x for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    if len(piv_cols) < n:
        raise ValueError("underdetermined system")
    for i in range(r, m):
        if aug[i][n] != 0:
            raise ValueError("inconsistent system")
    x = [0] * n
    for row_idx, c in enumerate(piv_cols):
        x[c] = aug[row_idx][n]
    return x
