"""Exact dense linear algebra over the rationals and integers.

Everything in this package runs at desk scale (matrix sizes bounded by the
lattice rank plus a handful of graph nodes), so these routines optimize for
exactness and determinism, not asymptotics.  Integer elimination uses the
fraction-free Bareiss scheme; rational systems are row-scaled to integers
first so that the hot paths stay in plain ``int`` arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor


class NonPositivePivot(Exception):
    """Raised by ``ldl`` when a pivot is <= 0; carries the 1-based index."""

    def __init__(self, index: int):
        super().__init__(f"pivot {index} is not positive")
        self.index = index


def int_det(rows: list[list[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss elimination)."""
    n = len(rows)
    if n == 0:
        return 1
    m = [row[:] for row in rows]
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
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def int_solve(a: list[list[int]], b: list[int]) -> tuple[list[int], int] | None:
    """Solve a square integer system by Cramer's rule.

    Returns ``(nums, den)`` with solution ``x_i = nums[i] / den`` and
    ``den = det(a) != 0``, or ``None`` if the matrix is singular.
    """
    den = int_det(a)
    if den == 0:
        return None
    n = len(a)
    nums = []
    for i in range(n):
        cols = [row[:] for row in a]
        for r in range(n):
            cols[r][i] = b[r]
        nums.append(int_det(cols))
    return nums, den


def int_rank(rows: list[list[int]]) -> int:
    """Rank over Q of an integer matrix (fraction-free elimination)."""
    m = [row[:] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    row = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(row, nrows):
            if m[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[row], m[pivot_row] = m[pivot_row], m[row]
        pivot = m[row][col]
        for i in range(row + 1, nrows):
            if m[i][col] != 0:
                f = m[i][col]
                m[i] = [m[i][j] * pivot - f * m[row][j] for j in range(ncols)]
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


def _scale_rows(a, b):
    """Row-scale a rational augmented system to integers (solution unchanged)."""
    n = len(a)
    ai = []
    bi = []
    for r in range(n):
        entries = [Fraction(x) for x in a[r]] + [Fraction(b[r])]
        den = 1
        for e in entries:
            den = den * e.denominator // _gcd(den, e.denominator)
        ai.append([int(e * den) for e in entries[:-1]])
        bi.append(int(entries[-1] * den))
    return ai, bi


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def solve(a, b) -> list[Fraction] | None:
    """Exact solution of a square rational system, or None if singular."""
    ai, bi = _scale_rows(a, b)
    res = int_solve(ai, bi)
    if res is None:
        return None
    nums, den = res
    return [Fraction(num, den) for num in nums]


def ldl(gram) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Square-root-free Cholesky of a symmetric rational matrix.

    Returns ``(d, l)`` with ``x^T G x = sum_i d[i] * (x_i + sum_{j>i} l[i][j] x_j)^2``.
    Raises :class:`NonPositivePivot` at the first pivot <= 0, whose 1-based
    index equals the index of the first non-positive leading principal minor.
    """
    n = len(gram)
    d: list[Fraction] = []
    l = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        di = Fraction(gram[i][i])
        for k in range(i):
            di -= d[k] * l[k][i] * l[k][i]
        if di <= 0:
            raise NonPositivePivot(i + 1)
        d.append(di)
        for j in range(i + 1, n):
            v = Fraction(gram[i][j])
            for k in range(i):
                v -= d[k] * l[k][i] * l[k][j]
            l[i][j] = v / di
    return d, l


def affine_rank(points) -> int:
    """Dimension of the affine hull of a list of rational points."""
    if len(points) <= 1:
        return 0
    base = points[0]
    diffs = []
    for p in points[1:]:
        row = [Fraction(x) - Fraction(y) for x, y in zip(p, base)]
        den = 1
        for e in row:
            den = den * e.denominator // _gcd(den, e.denominator)
        diffs.append([int(e * den) for e in row])
    return int_rank(diffs)


def floor_fraction(x: Fraction) -> int:
    return floor(x)
