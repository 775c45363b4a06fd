"""Small exact matrix helpers.

Matrices are immutable tuples of row tuples with int or Fraction entries.
Everything here is exact; sizes in this package are tiny (at most 2n x 2n
with n <= 4), so no numerical library is involved.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = tuple[tuple[int, ...], ...]


def mat(rows) -> Matrix:
    out = tuple(tuple(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def shape(a: Matrix) -> tuple[int, int]:
    return (len(a), len(a[0]) if a else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Matrix:
    return tuple((0,) * c for _ in range(r))


def diag(entries) -> Matrix:
    entries = tuple(entries)
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a: Matrix) -> Matrix:
    r, c = shape(a)
    return tuple(tuple(a[i][j] for i in range(r)) for j in range(c))


def add(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise ValueError("shape mismatch")
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise ValueError("shape mismatch")
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def neg(a: Matrix) -> Matrix:
    return tuple(tuple(-x for x in r) for r in a)


def scale(c, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in r) for r in a)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError(f"cannot multiply {shape(a)} by {shape(b)}")
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Matrix, v) -> tuple:
    r, c = shape(a)
    v = tuple(v)
    if len(v) != c:
        raise ValueError(f"cannot apply {shape(a)} to vector of length {len(v)}")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vstack(top: Matrix, bottom: Matrix) -> Matrix:
    if top and bottom and len(top[0]) != len(bottom[0]):
        raise ValueError("column mismatch")
    return top + bottom


def hstack(left: Matrix, right: Matrix) -> Matrix:
    if len(left) != len(right):
        raise ValueError("row mismatch")
    return tuple(l + r for l, r in zip(left, right))


def inverse(a: Matrix) -> Matrix:
    """Exact inverse over the rationals (Gauss-Jordan with Fraction pivots)."""
    n, c = shape(a)
    if n != c:
        raise ValueError("inverse of a non-square matrix")
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        work[col], work[pivot] = work[pivot], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def as_int_matrix(a: Matrix) -> Matrix:
    """Cast a rational matrix with integral entries back to ints."""
    out = []
    for row in a:
        new = []
        for x in row:
            f = Fraction(x)
            if f.denominator != 1:
                raise ValueError(f"non-integral entry {f}")
            new.append(int(f))
        out.append(tuple(new))
    return tuple(out)


def det(a: Matrix) -> Fraction:
    n, c = shape(a)
    if n != c:
        raise ValueError("determinant of a non-square matrix")
    work = [[Fraction(x) for x in row] for row in a]
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            result = -result
        result *= work[col][col]
        inv = 1 / work[col][col]
        for r in range(col + 1, n):
            if work[r][col] != 0:
                f = work[r][col] * inv
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return result
