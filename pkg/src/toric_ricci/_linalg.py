"""Small exact linear algebra over ``fractions.Fraction``.

Matrices are lists of rows. Nothing here is clever; the sizes involved
(rank <= 8, a few dozen rows) make Gaussian elimination on rationals
instantaneous.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = list
Matrix = list


def to_fraction_matrix(rows) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def matvec(M: Sequence[Sequence], v: Sequence) -> Vector:
    return [dot(row, v) for row in M]


def vecmat(v: Sequence, M: Sequence[Sequence]) -> Vector:
    if not M:
        return []
    return [sum((Fraction(v[i]) * M[i][j] for i in range(len(M))), Fraction(0))
            for j in range(len(M[0]))]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = transpose(B)
    return [[dot(row, col) for col in Bt] for row in A]


def transpose(M: Sequence[Sequence]) -> Matrix:
    if not M:
        return []
    return [list(col) for col in zip(*M)]


def add(u: Sequence, v: Sequence) -> Vector:
    return [Fraction(a) + b for a, b in zip(u, v)]


def sub(u: Sequence, v: Sequence) -> Vector:
    return [Fraction(a) - b for a, b in zip(u, v)]


def scale(c, v: Sequence) -> Vector:
    return [Fraction(c) * a for a in v]


def rref(M: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = to_fraction_matrix(M)
    if not A:
        return A, []
    nrows, ncols = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M: Sequence[Sequence]) -> int:
    return len(rref(M)[1])


def nullspace(M: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis of {x : M x = 0}, one free variable set to 1 per basis vector."""
    if not M:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, pivots = rref(M)
    n = len(R[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> Vector:
    """Solve a square nonsingular system exactly."""
    n = len(A)
    aug = [list(row) + [b[i]] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [R[i][n] for i in range(n)]


def inverse(A: Sequence[Sequence]) -> Matrix:
    n = len(A)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def det(A: Sequence[Sequence]) -> Fraction:
    M = to_fraction_matrix(A)
    n = len(M)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            if f:
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return d


def fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
