"""Exact integer / rational linear algebra.

Everything here works on plain Python ints (arbitrary precision) or
fractions.Fraction; there is no floating point anywhere in the package.
Matrices are lists of row lists.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import DecodeError, ParameterError

IntMatrix = list  # list[list[int]]
IntVector = list  # list[int]


def dims(m: IntMatrix) -> tuple[int, int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(r) != cols for r in m):
        raise ParameterError("ragged matrix")
    return rows, cols


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m: IntMatrix) -> IntMatrix:
    return [list(col) for col in zip(*m)] if m else []


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    ra, ca = dims(a)
    rb, cb = dims(b)
    if ca != rb:
        raise ParameterError(f"shape mismatch: {ra}x{ca} @ {rb}x{cb}")
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: IntMatrix, x: IntVector) -> IntVector:
    ra, ca = dims(a)
    if ca != len(x):
        raise ParameterError(f"shape mismatch: {ra}x{ca} @ len {len(x)}")
    return [sum(c * v for c, v in zip(row, x)) for row in a]


def vec_add(x: IntVector, y: IntVector) -> IntVector:
    return [a + b for a, b in zip(x, y)]


def scalar_vec(c: int, x: IntVector) -> IntVector:
    return [c * v for v in x]


def dot(x: IntVector, y: IntVector) -> int:
    if len(x) != len(y):
        raise ParameterError("dot: length mismatch")
    return sum(a * b for a, b in zip(x, y))


def det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    if any(len(r) != n for r in m):
        raise ParameterError("det: matrix not square")
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(m: IntMatrix) -> int:
    """Exact rank via rational Gaussian elimination."""
    rows, cols = dims(m)
    a = [[Fraction(v) for v in r] for r in m]
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c]
        a[r] = [v / inv for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def all_submatrices_nonsingular(m: IntMatrix, size: int) -> bool:
    """True iff every selection of `size` rows of the `size`-column matrix
    `m` has nonzero determinant (computed exactly)."""
    rows, cols = dims(m)
    if cols != size:
        raise ParameterError(f"expected {size} columns, got {cols}")
    if rows < size:
        raise ParameterError(f"need at least {size} rows, got {rows}")
    return all(det([m[i] for i in sel]) != 0
               for sel in combinations(range(rows), size))


def _normalize_int_vector(x: IntVector) -> IntVector:
    g = 0
    for v in x:
        g = gcd(g, v)
    if g > 1:
        x = [v // g for v in x]
    lead = next((v for v in x if v != 0), 0)
    if lead < 0:
        x = [-v for v in x]
    return x


def integer_null_vector(mat: IntMatrix, width: int | None = None) -> IntVector:
    """A nonzero integer vector x with mat @ x = 0, for an (m-1)-by-m mat.

    The convention for m = 1 (empty matrix) is x = (1,).  The result is
    gcd-reduced with its first nonzero entry positive, so the output is
    deterministic.  When every maximal square submatrix of mat is
    nonsingular, every entry of x is nonzero.
    """
    if width is None:
        if not mat:
            raise ParameterError("width required for an empty matrix")
        width = len(mat[0])
    m = width
    if m < 1:
        raise ParameterError("width must be >= 1")
    if len(mat) != m - 1 or any(len(r) != m for r in mat):
        raise ParameterError(f"expected ({m - 1})x{m} matrix")
    if m == 1:
        return [1]
    # Generalized cross product: signed maximal minors.
    x = []
    for j in range(m):
        minor = [[r[c] for c in range(m) if c != j] for r in mat]
        x.append((-1) ** j * det(minor))
    if any(v != 0 for v in x):
        return _normalize_int_vector(x)
    # mat is rank deficient; fall back to rational elimination.
    return _normalize_int_vector(_nullspace_vector(mat, m))


def _nullspace_vector(mat: IntMatrix, m: int) -> IntVector:
    a = [[Fraction(v) for v in r] for r in mat]
    rows = len(a)
    pivots: list[int] = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c]
        a[r] = [v / inv for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = next(c for c in range(m) if c not in pivots)
    x = [Fraction(0)] * m
    x[free] = Fraction(1)
    for row, c in zip(a, pivots):
        x[c] = -row[free]
    denom = 1
    for v in x:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    return [int(v * denom) for v in x]


def solve_exact(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Solve a @ x = b exactly for the unique x, where a is p-by-r with
    p >= r and full column rank; b is p-by-c.

    Raises DecodeError if a is rank deficient or the (overdetermined)
    system is inconsistent.  Entries of x come back as ints when integral,
    otherwise Fractions.
    """
    p, r = dims(a)
    pb, c = dims(b)
    if pb != p:
        raise ParameterError("solve_exact: row count mismatch")
    if p < r:
        raise DecodeError(f"underdetermined system: {p} equations, {r} unknowns")
    aug = [[Fraction(v) for v in ra] + [Fraction(v) for v in rb]
           for ra, rb in zip(a, b)]
    row = 0
    for col in range(r):
        piv = next((i for i in range(row, p) if aug[i][col] != 0), None)
        if piv is None:
            raise DecodeError(f"rank deficient: no pivot in column {col}")
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = aug[row][col]
        aug[row] = [v / inv for v in aug[row]]
        for i in range(p):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[row])]
        row += 1
    for i in range(row, p):
        if any(v != 0 for v in aug[i][r:]):
            raise DecodeError("inconsistent system")
    x = [aug[i][r:] for i in range(r)]
    return [[int(v) if v.denominator == 1 else v for v in line] for line in x]
