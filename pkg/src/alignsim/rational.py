"""Exact rational linear algebra.

A deliberately small Gaussian-elimination kernel over ``fractions.Fraction``,
used as a slow secondary oracle for matrices up to about 32x32: it anchors
the floating-point tolerance policy in the test suite and provides the
exact solve path for basis decompositions.
"""

from fractions import Fraction

__all__ = ["exact_rank", "exact_solve", "to_fractions"]

_MAX_SIDE = 64


def to_fractions(rows):
    """Deep-copy a matrix-like nest of numbers into Fractions."""
    return [[Fraction(x) for x in row] for row in rows]


def _check(rows):
    m = to_fractions(rows)
    if not m or not m[0]:
        raise ValueError("empty matrix")
    ncols = len(m[0])
    if any(len(r) != ncols for r in m):
        raise ValueError("ragged matrix")
    if len(m) > _MAX_SIDE or ncols > _MAX_SIDE:
        raise ValueError("exact path is limited to small matrices")
    return m


def exact_rank(rows):
    """Rank over the rationals via fraction-free-enough Gaussian elimination."""
    m = _check(rows)
    nrows, ncols = len(m), len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = m[row][col]
        for r in range(row + 1, nrows):
            if m[r][col] != 0:
                factor = m[r][col] / inv
                m[r] = [a - factor * b for a, b in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


def exact_solve(rows, rhs):
    """Solve a square rational system exactly; raises on singular input."""
    a = _check(rows)
    b = [Fraction(x) for x in rhs]
    n = len(a)
    if len(a[0]) != n or len(b) != n:
        raise ValueError("exact_solve expects a square system")
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular system")
        a[col], a[pivot] = a[pivot], a[col]
        b[col], b[pivot] = b[pivot], b[col]
        inv = a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                factor = a[r][col] / inv
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
                b[r] -= factor * b[col]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        acc = b[r] - sum(a[r][c] * x[c] for c in range(r + 1, n))
        x[r] = acc / a[r][r]
    return x
