"""Small dense exact linear algebra over rational-like fields.

Entries may be int, Fraction or GaussianRational; integers are promoted to
Fraction so that division is exact.  Pivoting is deterministic (first
nonzero entry scanning down), which keeps kernel bases reproducible.
"""

from __future__ import annotations

from fractions import Fraction


def _field(x):
    return Fraction(x) if isinstance(x, int) else x


def eye(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m):
    return [list(col) for col in zip(*m)] if m else []

def mat_mul(a, b):
    if not a or not b:
        return []
    cols = len(b[0])
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)]
        for i in range(len(a))
    ]


def mat_vec(a, v):
    return [sum(row[j] * v[j] for j in range(len(v))) for row in a]


def rref(matrix):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    rows = [[_field(x) for x in row] for row in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def kernel_basis(matrix, ncols):
    """Basis of {v : matrix @ v = 0}, deterministic, over the entry field.

    ``matrix`` rows are linear constraints on a vector of length ``ncols``.
    An empty constraint list yields the standard basis.
    """
    rows = [row for row in matrix if any(x != 0 for x in row)]
    if not rows:
        return [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -red[r][free]
        basis.append(vec)
    return basis


def det(matrix):
    """Exact determinant by fraction-level Gaussian elimination."""
    n = len(matrix)
    rows = [[_field(x) for x in row] for row in matrix]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot is None:
            return Fraction(0) * result
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            sign = -sign
        result = result * rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return sign * result


def inverse(matrix):
    """Exact inverse of a square matrix; raises ValueError when singular."""
    n = len(matrix)
    aug = [
        [_field(x) for x in row] + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
        for i, row in enumerate(matrix)
    ]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red[:n]]
