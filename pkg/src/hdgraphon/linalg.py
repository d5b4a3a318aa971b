"""Exact rational row reduction.

Small dense matrices only (desk scale); rows are lists of Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Matrix = Sequence[Sequence]


def rref(m: Matrix, ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of ``m`` and its pivot columns.

    ``ncols`` is required when ``m`` has no rows.
    """
    rows = [[Fraction(x) for x in row] for row in m]
    if ncols is None:
        if not rows:
            raise ValueError("ncols is required for an empty matrix")
        ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(m: Matrix, ncols: int | None = None) -> int:
    if not m:
        return 0
    return len(rref(m, ncols)[1])


def nullspace(m: Matrix, ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : m x = 0}``, one vector per free column."""
    rows, pivots = rref(m, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in enumerate(pivots):
            x[p] = -rows[r][f]
        basis.append(x)
    return basis


def primitive_integer(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to coprime integers (sign preserved)."""
    den = lcm(*(Fraction(x).denominator for x in v))
    ints = [int(Fraction(x) * den) for x in v]
    g = gcd(*ints)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in ints)


def solve(m: Matrix, b: Sequence, ncols: int) -> list[Fraction] | None:
    """One exact solution of ``m x = b`` (free variables set to 0), or None."""
    aug = [list(row) + [bv] for row, bv in zip(m, b)]
    rows, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        x[p] = rows[r][ncols]
    return x
