"""Small exact linear algebra over Q and Z (Fractions, ints)."""

from __future__ import annotations

from fractions import Fraction
from math import lcm


def rref(rows):
    """Reduced row echelon form; returns (matrix, pivot_columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    return len(rref(rows)[1])


def det(mat) -> Fraction:
    m = [[Fraction(x) for x in r] for r in mat]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        p = m[c][c]
        d *= p
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / p
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


def inverse(mat):
    n = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def solve_left(rows, target):
    """Coefficients ``y`` with ``sum_i y_i rows[i] == target``, or None."""
    k = len(rows)
    if k == 0:
        return [] if not any(target) else None
    n = len(target)
    aug = [[Fraction(rows[i][j]) for i in range(k)] + [Fraction(target[j])] for j in range(n)]
    red, piv = rref(aug)
    if k in piv:
        return None
    y = [Fraction(0)] * k
    for r, c in enumerate(piv):
        y[c] = red[r][k]
    return y


def column_hnf(A):
    """Integer column-style Hermite reduction.

    Returns ``(H, V)`` with ``A V = [H | 0]`` for a unimodular ``V``; ``H`` is
    square lower triangular when ``A`` has full row rank.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    a = [list(map(int, r)) for r in A]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(i, j, q):  # col_j -= q * col_i
        for r in range(m):
            a[r][j] -= q * a[r][i]
        for r in range(n):
            V[r][j] -= q * V[r][i]

    def swap(i, j):
        for r in range(m):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(n):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    col = 0
    for row in range(m):
        if col >= n:
            break
        while True:
            nz = [j for j in range(col, n) if a[row][j]]
            if not nz:
                break
            piv = min(nz, key=lambda j: abs(a[row][j]))
            if piv != col:
                swap(piv, col)
            done = True
            for j in range(col + 1, n):
                if a[row][j]:
                    colop(col, j, a[row][j] // a[row][col])
                    if a[row][j]:
                        done = False
            if done:
                break
        if a[row][col]:
            if a[row][col] < 0:
                for r in range(m):
                    a[r][col] = -a[r][col]
                for r in range(n):
                    V[r][col] = -V[r][col]
            col += 1
    H = [r[:col] for r in a]
    return H, V


def saturated_basis(rows):
    """Basis of (Q-row-span of ``rows``) intersected with Z^N, plus the change of basis.

    Returns ``(C, B)`` with ``rows == C * B`` (C rational k x k, B integer k x N)
    when the rows are linearly independent.
    """
    scales = []
    ints = []
    for r in rows:
        d = 1
        for x in r:
            d = lcm(d, Fraction(x).denominator)
        scales.append(d)
        ints.append([int(Fraction(x) * d) for x in r])
    H, V = column_hnf(ints)
    k = len(H[0]) if H else 0
    Vinv = integer_inverse(V)
    B = Vinv[:k]
    C = [[Fraction(H[i][j], scales[i]) for j in range(k)] for i in range(len(rows))]
    return C, B


def integer_inverse(V):
    inv = inverse(V)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out
