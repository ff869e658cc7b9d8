"""Exact integer linear algebra: Bareiss determinant, Berkowitz charpoly."""

from __future__ import annotations

from typing import Sequence


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination.

    Every intermediate entry is itself a minor of the input, so all
    divisions are exact and no rationals appear.
    """
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in matrix]
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        row_k = m[k][k + 1:]
        for i in range(k + 1, n):
            row_i = m[i]
            a = row_i[k]
            tail = row_i[k + 1:]
            if a == 0:
                m[i] = row_i[:k + 1] + [pivot * x // prev for x in tail]
            else:
                m[i] = row_i[:k + 1] + [
                    (pivot * x - a * y) // prev for x, y in zip(tail, row_k)
                ]
        prev = pivot
    return sign * m[n - 1][n - 1]


def berkowitz_charpoly(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients of det(xI - A), highest degree first, without division.

    Grows the leading principal submatrix one row/column at a time; each
    step multiplies the running coefficient vector by a lower-triangular
    Toeplitz matrix built from the new row, column and diagonal entry.
    """
    n = len(matrix)
    if n == 0:
        return [1]
    a = [list(map(int, row)) for row in matrix]
    poly = [1, -a[0][0]]
    for k in range(1, n):
        row = a[k][:k]
        col = [a[i][k] for i in range(k)]
        # toeplitz column: 1, -a_kk, -R C, -R M C, ..., -R M^{k-1} C
        t = [1, -a[k][k]]
        v = col
        for _ in range(k):
            t.append(-sum(r * x for r, x in zip(row, v)))
            v = [sum(a[i][j] * v[j] for j in range(k)) for i in range(k)]
        poly = [
            sum(t[i - j] * poly[j] for j in range(min(i, k) + 1))
            for i in range(k + 2)
        ]
    return poly
