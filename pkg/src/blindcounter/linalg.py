"""Exact rational linear algebra over row-vector matrices.

Matrices are lists of rows; entries are ints or Fractions. Nothing here
touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fraction_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def transpose(rows: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*rows)]


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are taken on the first nonzero entry of each column, scanning
    columns left to right.
    """
    a = [row[:] for row in m]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        for i in range(r, nrows):
            if a[i][c] != 0:
                break
        else:
            continue
        a[r], a[i] = a[i], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 0
    return len(rref(to_fraction_matrix(rows))[1])


def nullspace(m: Matrix, ncols: int) -> list[list[Fraction]]:
    """Basis of {x : m x = 0} (column convention), one vector per free column."""
    if not m:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(x)
    return basis


def primitive_integer_vector(x: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to integers (LCM of denominators), then divide out the gcd."""
    lcm = 1
    for q in x:
        lcm = lcm * q.denominator // gcd(lcm, q.denominator)
    ints = [int(q * lcm) for q in x]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def left_kernel_vector(images: Sequence[Sequence[int]], n: int) -> tuple[int, ...] | None:
    """A nonzero integer z with sum z_i * images[i] == 0, or None if the rows are independent.

    The result always has at least one positive entry.
    """
    p = len(images)
    if p == 0:
        return None
    # z S = 0  <=>  S^T z^T = 0
    st = to_fraction_matrix(transpose(images, n)) if n else []
    basis = nullspace(st, p)
    if not basis:
        return None
    z = primitive_integer_vector(basis[0])
    if not any(v > 0 for v in z):
        z = tuple(-v for v in z)
    return z


def right_inverse(images: Sequence[Sequence[int]], n: int) -> Matrix:
    """An n x p rational matrix N with S N = I_p, where S has the p images as rows.

    Requires rank(S) == p. N is supported on the pivot columns of S.
    """
    p = len(images)
    if p == 0:
        return [[] for _ in range(n)]
    s = to_fraction_matrix(images)
    _, pivots = rref(s)
    if len(pivots) != p:
        raise ValueError("map is not injective")
    # square p x p block of S on pivot columns; invert it
    block = [[s[i][c] for c in pivots] for i in range(p)]
    aug = [block[i] + [Fraction(int(i == j)) for j in range(p)] for i in range(p)]
    red, _ = rref(aug)
    inv = [row[p:] for row in red]
    out: Matrix = [[Fraction(0)] * p for _ in range(n)]
    for k, c in enumerate(pivots):
        out[c] = inv[k][:]
    return out
