"""Exact linear algebra over F_p (modulus given) or Q (modulus None).

Matrices are lists of rows. Over F_p entries are ints reduced mod p;
over Q they are Fractions (ints are promoted).
"""
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from app.core.errors import SingularMatrixError

Matrix = list[list]


def _cast(x, modulus: Optional[int]):
    if modulus:
        return int(x) % modulus
    return Fraction(x)


def _inverse(x, modulus: Optional[int]):
    if modulus:
        return pow(x, -1, modulus)
    return 1 / x


def _reduce(x, modulus: Optional[int]):
    return x % modulus if modulus else x


def to_matrix(rows: Sequence[Sequence], modulus: Optional[int] = None) -> Matrix:
    """Copy rows into a fresh matrix over the chosen field."""
    return [[_cast(x, modulus) for x in row] for row in rows]


def row_echelon(rows: Sequence[Sequence], modulus: Optional[int] = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = to_matrix(rows, modulus)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = _inverse(m[r][c], modulus)
        m[r] = [_reduce(x * inv, modulus) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [_reduce(x - f * y, modulus) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence], modulus: Optional[int] = None) -> int:
    """Rank of a matrix."""
    return len(row_echelon(rows, modulus)[1])


def first_dependent(vectors: Sequence[Sequence], modulus: Optional[int] = None) -> Optional[int]:
    """Index of the first vector lying in the span of the earlier ones."""
    for k in range(len(vectors)):
        if rank(vectors[:k + 1], modulus) <= k:
            return k
    return None


def kernel_vector(rows: Sequence[Sequence], modulus: Optional[int] = None) -> Optional[list]:
    """A nonzero vector x with rows . x = 0, or None if the kernel is trivial."""
    if not rows:
        return None
    ncols = len(rows[0])
    reduced, pivots = row_echelon(rows, modulus)
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    x = [_cast(0, modulus) for _ in range(ncols)]
    x[f] = _cast(1, modulus)
    for r, c in enumerate(pivots):
        x[c] = _reduce(-reduced[r][f], modulus)
    return x


def solve(matrix: Sequence[Sequence], rhs: Sequence, modulus: Optional[int] = None) -> list:
    """Unique solution of a square system.

    Raises:
        SingularMatrixError: matrix is singular
    """
    n = len(matrix)
    augmented = [list(row) + [b] for row, b in zip(matrix, rhs)]
    reduced, pivots = row_echelon(augmented, modulus)
    if pivots != list(range(n)):
        raise SingularMatrixError(f"{n}x{n} system is singular")
    return [reduced[i][n] for i in range(n)]


def inverse(matrix: Sequence[Sequence], modulus: Optional[int] = None) -> Matrix:
    """Matrix inverse.

    Raises:
        SingularMatrixError: matrix is singular
    """
    n = len(matrix)
    augmented = [list(row) + [1 if i == j else 0 for j in range(n)]
                 for i, row in enumerate(matrix)]
    reduced, pivots = row_echelon(augmented, modulus)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError(f"{n}x{n} matrix is singular")
    return [row[n:] for row in reduced]


def multiply(a: Sequence[Sequence], b: Sequence[Sequence], modulus: Optional[int] = None) -> Matrix:
    """Matrix product."""
    cols = list(zip(*b))
    return [[_reduce(sum(x * y for x, y in zip(row, col)), modulus) for col in cols]
            for row in a]


def mat_vec(a: Sequence[Sequence], v: Sequence, modulus: Optional[int] = None) -> list:
    """Matrix times column vector."""
    return [_reduce(sum(x * y for x, y in zip(row, v)), modulus) for row in a]


def integer_determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free Bareiss)."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def determinant(rows: Sequence[Sequence], modulus: Optional[int] = None):
    """Determinant over F_p or exactly over Q."""
    if modulus:
        return integer_determinant([[int(x) % modulus for x in row] for row in rows]) % modulus
    if all(isinstance(x, int) for row in rows for x in row):
        return integer_determinant(rows)
    denominator = 1
    for row in rows:
        for x in row:
            denominator = denominator * Fraction(x).denominator // gcd(denominator, Fraction(x).denominator)
    scaled = [[int(Fraction(x) * denominator) for x in row] for row in rows]
    return Fraction(integer_determinant(scaled), denominator ** len(rows))


def primitive_integer_vector(vector: Sequence) -> list[int]:
    """Scale a rational vector to coprime integers with positive leading entry."""
    fractions = [Fraction(x) for x in vector]
    denominator = 1
    for x in fractions:
        denominator = denominator * x.denominator // gcd(denominator, x.denominator)
    ints = [int(x * denominator) for x in fractions]
    content = 0
    for x in ints:
        content = gcd(content, x)
    if content == 0:
        return ints
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        content = -content
    return [x // content for x in ints]


def standard_completion(vectors: Sequence[Sequence], dim: int, modulus: Optional[int] = None) -> list[list]:
    """Append standard basis vectors, first-not-in-span first, until a basis of the space."""
    basis = [list(v) for v in vectors]
    for i in range(dim):
        if len(basis) == dim:
            break
        unit = [1 if j == i else 0 for j in range(dim)]
        if rank(basis + [unit], modulus) > len(basis):
            basis.append(unit)
    return basis
