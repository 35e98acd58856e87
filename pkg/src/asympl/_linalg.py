"""Exact linear algebra over the rationals and integers.

Matrices are plain lists of lists (Fractions or ints).  Nothing here makes a
floating-point rank decision; this is what keeps the classification paths of
the toolkit exact.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DimensionMismatchError


def frac_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def rref(matrix):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = frac_matrix(matrix)
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def nullspace(matrix, ncols=None):
    """Exact rational basis of {x : M x = 0} as a list of Fraction vectors."""
    if not matrix:
        if ncols is None:
            raise DimensionMismatchError("empty matrix needs an explicit ncols")
        return [[Fraction(i == j) for i in range(ncols)] for j in range(ncols)]
    ncols = len(matrix[0])
    rows, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -rows[r][f]
        basis.append(vec)
    return basis


def solve(matrix, rhs):
    """One exact solution of M x = b, or None if inconsistent."""
    if not matrix:
        return None
    ncols = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = rows[r][ncols]
    return x


def det(matrix) -> Fraction:
    rows = frac_matrix(matrix)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatchError("determinant of a non-square matrix")
    sign = Fraction(1)
    out = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            sign = -sign
        out *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return sign * out


def inverse(matrix):
    """Exact inverse of a square rational matrix, or None if singular."""
    n = len(matrix)
    aug = [list(map(Fraction, row)) + [Fraction(i == j) for j in range(n)]
           for i, row in enumerate(matrix)]
    rows, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in rows]


# -- integer matrices ---------------------------------------------------------

def int_identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def int_matmul(a, b):
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatchError("matrix product shape mismatch")
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def int_matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def int_transpose(a):
    return [list(col) for col in zip(*a)]


def int_det(matrix) -> int:
    d = det(matrix)
    assert d.denominator == 1
    return int(d)


def unimodular_inverse(matrix):
    """Integer inverse of a unimodular integer matrix."""
    inv = inverse(matrix)
    if inv is None:
        raise DimensionMismatchError("matrix is singular")
    out = []
    for row in inv:
        ints = []
        for x in row:
            if x.denominator != 1:
                raise DimensionMismatchError("matrix is not unimodular")
            ints.append(int(x))
        out.append(ints)
    return out
