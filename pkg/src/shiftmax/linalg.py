"""Exact rational Gaussian elimination."""

from __future__ import annotations

from fractions import Fraction


def row_echelon(rows):
    """Reduced row echelon form over Q; returns ``(rows, pivot_columns)``."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(row_echelon(rows)[1])


def affine_dimension(points) -> int:
    """Dimension of the affine hull; ``-1`` for no points."""
    pts = [list(map(Fraction, p)) for p in points]
    if not pts:
        return -1
    base = pts[0]
    return rank([[x - y for x, y in zip(p, base)] for p in pts[1:]])


def solve(a, b):
    """One exact solution of ``a x = b`` (free variables set to 0), or ``None``."""
    aug = [list(r) + [y] for r, y in zip(a, b)]
    red, piv = row_echelon(aug)
    ncols = len(a[0]) if a else 0
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, c in zip(red, piv):
        x[c] = row[-1]
    return x
