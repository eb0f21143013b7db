"""Small dense linear algebra over exact or mpmath scalars.

Matrices are lists of rows.  Elimination picks the first nonzero pivot
for exact entries and the largest pivot for floating entries.
"""

from __future__ import annotations

from collections.abc import Sequence

from gmpy2 import mpq

from .scalars import BqkzError


class SingularMatrix(BqkzError):
    """Elimination met a vanishing pivot."""


def identity(n: int, one=None, zero=None) -> list[list]:
    one = mpq(1) if one is None else one
    zero = mpq(0) if zero is None else zero
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None, zero=None) -> list[list]:
    zero = mpq(0) if zero is None else zero
    return [[zero] * (n if m is None else m) for _ in range(n)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    n, m = len(a), len(b[0])
    inner = len(b)
    out = []
    for i in range(n):
        row = a[i]
        acc = [0] * m
        for k in range(inner):
            x = row[k]
            if x == 0:
                continue
            bk = b[k]
            for j in range(m):
                y = bk[j]
                if y != 0:
                    acc[j] = acc[j] + x * y
        out.append(acc)
    return out


def mat_vec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v) if x != 0), 0 * v[0]) for row in a]


def mat_add(a, b, scale=1) -> list[list]:
    return [[x + scale * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c) -> list[list]:
    return [[c * x for x in row] for row in a]


def transpose(a) -> list[list]:
    return [list(r) for r in zip(*a)]


def permute(a, perm: Sequence[int]) -> list[list]:
    """``P a P`` for the involutive permutation matrix with ``P e_j = e_perm[j]``."""
    n = len(a)
    return [[a[perm[i]][perm[j]] for j in range(n)] for i in range(n)]


def _is_exact(x) -> bool:
    return isinstance(x, (int, type(mpq(0))))


def solve(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    """Solve ``a x = b`` (b a matrix) by Gauss-Jordan elimination."""
    n = len(a)
    aug = [list(a[i]) + list(b[i]) for i in range(n)]
    exact = all(_is_exact(x) for row in a for x in row)
    for c in range(n):
        if exact:
            p = next((r for r in range(c, n) if aug[r][c] != 0), None)
        else:
            p = max(range(c, n), key=lambda r: abs(aug[r][c]))
            if aug[p][c] == 0:
                p = None
        if p is None:
            raise SingularMatrix("singular matrix")
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        row_c = [x / piv for x in aug[c]]
        aug[c] = row_c
        for r in range(n):
            if r != c:
                f = aug[r][c]
                if f != 0:
                    aug[r] = [x - f * y for x, y in zip(aug[r], row_c)]
    return [row[n:] for row in aug]


def inverse(a: Sequence[Sequence]) -> list[list]:
    n = len(a)
    one = a[0][0] * 0 + 1
    return solve(a, identity(n, one, one * 0))


def determinant(a: Sequence[Sequence]):
    n = len(a)
    m = [list(r) for r in a]
    exact = all(_is_exact(x) for row in m for x in row)
    det = m[0][0] * 0 + 1
    for c in range(n):
        if exact:
            p = next((r for r in range(c, n) if m[r][c] != 0), None)
        else:
            p = max(range(c, n), key=lambda r: abs(m[r][c]))
            if m[p][c] == 0:
                p = None
        if p is None:
            return det * 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        piv = m[c][c]
        det = det * piv
        for r in range(c + 1, n):
            f = m[r][c] / piv
            if f != 0:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def rank(a: Sequence[Sequence]) -> int:
    m = [list(r) for r in a]
    rows, cols = len(m), len(m[0]) if m else 0
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(r + 1, rows):
            f = m[i][c] / m[r][c]
            if f != 0:
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def is_zero(a) -> bool:
    return all(x == 0 for row in a for x in row)


def max_abs(a) -> float:
    return max((abs(x) for row in a for x in row), default=0)


def max_abs_diff(a, b):
    return max((abs(x - y) for ra, rb in zip(a, b) for x, y in zip(ra, rb)), default=0)
