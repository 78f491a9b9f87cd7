"""Exact linear algebra over Q (lists of Fractions) and over F_p."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def _common(A: Matrix) -> tuple[list[list[int]], int]:
    den = 1
    for row in A:
        for v in row:
            den = lcm(den, Fraction(v).denominator)
    return [[int(v * den) for v in row] for row in A], den


def matmul(A: Matrix, B: Matrix) -> Matrix:
    # integer products over a common denominator are much cheaper than Fraction sums
    Ai, da = _common(A)
    Bi, db = _common(B)
    Bt = list(zip(*Bi))
    d = da * db
    return [[Fraction(sum(a * b for a, b in zip(row, col)), d) for col in Bt] for row in Ai]


def transpose(A: Matrix) -> Matrix:
    return [list(r) for r in zip(*A)]


def add(A: Matrix, B: Matrix, t: Fraction | int = 1) -> Matrix:
    return [[a + t * b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(A: Matrix, t) -> Matrix:
    return [[t * a for a in row] for row in A]


def rref(A: Matrix) -> tuple[Matrix, list[int]]:
    M = [list(r) for r in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(A: Matrix) -> int:
    if not A:
        return 0
    return len(rref(A)[1])


def nullspace(A: Matrix, ncols: int | None = None) -> Matrix:
    """Basis of {v : A v = 0} as a list of vectors."""
    if not A:
        n = ncols or 0
        return identity(n)
    R, piv = rref(A)
    n = len(A[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def det(A: Matrix) -> Fraction:
    M = [list(r) for r in A]
    n = len(M)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d


def inverse(A: Matrix) -> Matrix:
    n = len(A)
    aug = [list(A[i]) + identity(n)[i] for i in range(n)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def charpoly(A: Matrix) -> list[Fraction]:
    """Coefficients c_0..c_n of det(x I - A) (monic, c_n = 1), Faddeev-LeVerrier."""
    n = len(A)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = zeros(n, n)
    I = identity(n)
    for k in range(1, n + 1):
        M = add(matmul(A, M), I, coeffs[n - k + 1])
        AM = matmul(A, M)
        coeffs[n - k] = -sum((AM[i][i] for i in range(n)), Fraction(0)) / k
    return coeffs


def poly_eval_matrix(coeffs: Sequence[Fraction], A: Matrix) -> Matrix:
    """Horner evaluation of sum c_k A^k."""
    n = len(A)
    R = zeros(n, n)
    I = identity(n)
    for c in reversed(coeffs):
        R = add(matmul(R, A), I, c)
    return R


def matpow(A: Matrix, k: int) -> Matrix:
    R = identity(len(A))
    P = A
    while k:
        if k & 1:
            R = matmul(R, P)
        P = matmul(P, P)
        k >>= 1
    return R


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    M = [[v % p for v in r] for r in rows]
    if not M:
        return 0
    r = 0
    cols = len(M[0])
    for c in range(cols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [v * inv % p for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        r += 1
    return r


def nullspace_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    M = [[v % p for v in r] for r in rows]
    piv_cols: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [v * inv % p for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    basis = []
    for f in (c for c in range(ncols) if c not in piv_cols):
        v = [0] * ncols
        v[f] = 1
        for i, pc in enumerate(piv_cols):
            v[pc] = -M[i][f] % p
        basis.append(v)
    return basis


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    return rank(to_matrix(rows))
