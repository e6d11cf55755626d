"""Dense linear algebra over an arbitrary exact field.

Matrices are lists (or tuples) of rows.  Nothing here assumes a particular
scalar type beyond ``+ - * /`` and comparison with ``0``, so the same routines
serve Q, Q(i) and Q(sqrt m).  Pivoting always takes the first nonzero entry,
which keeps every result deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import DomainError, ShapeError
from .scalars import conj

Matrix = list  # list[list[scalar]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def shape(a: Sequence[Sequence]) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*a)]


def conj_transpose(a: Sequence[Sequence]) -> Matrix:
    return [[conj(v) for v in col] for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ShapeError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    out = [[Fraction(0)] * cb for _ in range(ra)]
    for i, row in enumerate(a):
        acc = out[i]
        for t, v in enumerate(row):
            if v == 0:
                continue
            brow = b[t]
            for j in range(cb):
                w = brow[j]
                if w != 0:
                    acc[j] = acc[j] + v * w
    return out


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v) if x != 0 and y != 0), Fraction(0)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum((x * y for x, y in zip(u, v) if x != 0 and y != 0), Fraction(0))


def add(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    if shape(a) != shape(b):
        raise ShapeError("shape mismatch in matrix addition")
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def sub(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    if shape(a) != shape(b):
        raise ShapeError("shape mismatch in matrix subtraction")
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def scale(c, a: Sequence[Sequence]) -> Matrix:
    return [[c * x for x in row] for row in a]


def is_zero(a: Sequence[Sequence]) -> bool:
    return all(x == 0 for row in a for x in row)


def equal(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    return shape(a) == shape(b) and all(x == y for r, s in zip(a, b) for x, y in zip(r, s))


def rref(a: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [list(row) for row in a]
    rows, cols = shape(m)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c] if not isinstance(m[r][c], int) else Fraction(1, m[r][c])
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of {v : a v = 0}, one vector per free column."""
    cols = shape(a)[1] if a else (ncols or 0)
    if not a:
        return [[Fraction(int(i == j)) for i in range(cols)] for j in range(cols)]
    m, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * cols
        v[fcol] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -m[row][fcol]
        basis.append(v)
    return basis


def inverse(a: Sequence[Sequence]) -> Matrix:
    n, c = shape(a)
    if n != c:
        raise ShapeError("inverse of a non-square matrix")
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise DomainError("matrix is singular", name="singular")
    return [row[n:] for row in m]


def det(a: Sequence[Sequence]):
    n, c = shape(a)
    if n != c:
        raise ShapeError("determinant of a non-square matrix")
    m = [list(row) for row in a]
    d = Fraction(1)
    for col in range(n):
        p = next((i for i in range(col, n) if m[i][col] != 0), None)
        if p is None:
            return Fraction(0)
        if p != col:
            m[col], m[p] = m[p], m[col]
            d = -d
        piv = m[col][col]
        d = d * piv
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] / piv
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return d
