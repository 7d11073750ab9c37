"""Smith normal form over the integers with unimodular transforms."""

from __future__ import annotations

from typing import List, Tuple

from .base import IntegerRing, RingError
from .matrix import Matrix


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def smith_normal_form(m: Matrix) -> Tuple[List[int], Matrix, Matrix]:
    """Return ``(diag, L, R)`` with ``L @ m @ R`` diagonal, ``diag[i] | diag[i+1]``.

    ``diag`` has length ``min(nrows, ncols)``; trailing entries may be 0.
    """
    if not isinstance(m.ring, IntegerRing):
        raise RingError(f"smith_normal_form needs a matrix over ZZ, got {m.ring}")
    nr, nc = m.nrows, m.ncols
    A = [list(r) for r in m.rows]
    L = [[int(i == j) for j in range(nr)] for i in range(nr)]
    R = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_comb(i, j, a, b, c, d):
        # rows (i, j) <- (a*ri + b*rj, c*ri + d*rj), on A and L
        for M in (A, L):
            ri, rj = M[i], M[j]
            M[i] = [a * x + b * y for x, y in zip(ri, rj)]
            M[j] = [c * x + d * y for x, y in zip(ri, rj)]

    def col_comb(i, j, a, b, c, d):
        for M in (A, R):
            for row in M:
                x, y = row[i], row[j]
                row[i] = a * x + b * y
                row[j] = c * x + d * y

    for t in range(min(nr, nc)):
        # bring a nonzero entry of minimal size to (t, t)
        while True:
            nz = [(abs(A[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if A[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            if i != t:
                A[t], A[i] = A[i], A[t]
                L[t], L[i] = L[i], L[t]
            if j != t:
                for M in (A, R):
                    for row in M:
                        row[t], row[j] = row[j], row[t]
            for i in range(t + 1, nr):
                if A[i][t] and A[i][t] % A[t][t] == 0:
                    row_comb(t, i, 1, 0, -(A[i][t] // A[t][t]), 1)
                elif A[i][t]:
                    g, x, y = _xgcd(A[t][t], A[i][t])
                    a, b = A[t][t] // g, A[i][t] // g
                    row_comb(t, i, x, y, -b, a)
            for j in range(t + 1, nc):
                if A[t][j] and A[t][j] % A[t][t] == 0:
                    col_comb(t, j, 1, 0, -(A[t][j] // A[t][t]), 1)
                elif A[t][j]:
                    g, x, y = _xgcd(A[t][t], A[t][j])
                    a, b = A[t][t] // g, A[t][j] // g
                    col_comb(t, j, x, y, -b, a)
            if any(A[i][t] for i in range(t + 1, nr)) or any(A[t][j] for j in range(t + 1, nc)):
                continue
            # divisibility: fold an offending entry into row t
            p = A[t][t]
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if A[i][j] % p), None)
            if bad is None:
                break
            row_comb(t, bad[0], 1, 1, 0, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            L[t] = [-x for x in L[t]]
    diag = [A[i][i] for i in range(min(nr, nc))]
    from .base import ZZ

    return diag, Matrix.from_rows(ZZ, L, nr), Matrix.from_rows(ZZ, R, nc)


def determinant(m: Matrix) -> int:
    """Integer determinant by fraction-free elimination (Bareiss)."""
    n = m.nrows
    if n != m.ncols:
        raise RingError("determinant of a non-square matrix")
    A = [list(r) for r in m.rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1
