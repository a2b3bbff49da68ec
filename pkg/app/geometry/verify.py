"""Exhaustive exact certification of the hyperplane and Q-quadric conditions.

A set D in F^d meets some hyperplane in d+1 points iff some (d+1)-subset has
a vanishing determinant with rows (1, x); given that no such subset exists,
d+2 points lie on a common Q-quadric iff the determinant with rows
(1, x, Q(x)) vanishes.

The scan walks the lexicographic prefixes P of size N-2 (N the subset size)
and expands det[P; u; v] as a bilinear form u^T C v in the last two rows,
so every pair extending P is tested by one matrix product. Integer inputs
are reduced modulo word-sized primes whose product exceeds twice the
Hadamard bound of every N x N minor; a determinant is then zero iff it is
zero modulo all of them. Reported violations are re-checked with
arbitrary-precision determinants.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, prod
from typing import Iterator, Optional, Sequence, Union

import numpy as np
from sympy import prevprime

from app.config import settings
from app.core.errors import (
    ContractViolationError,
    DegenerateConfigurationError,
    FormMismatchError,
    InconsistentClassificationError,
    SingularMatrixError,
)
from app.geometry import linalg
from app.geometry.projective import AffinePoint
from app.geometry.quadform import QuadraticForm, RationalForm, evaluate
from app.models.certificate import Certificate, CertificateStatus, Violation, ViolationKind

logger = logging.getLogger(__name__)

WORD_MODULUS_LIMIT = 1 << 29

AnyForm = Union[QuadraticForm, RationalForm]


@dataclass(frozen=True)
class PointSet:
    """Points of F_p^d (prime set) or Z^d (prime None), in a fixed order."""

    points: tuple[tuple[int, ...], ...]
    dim: int
    prime: Optional[int] = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        pts = tuple(tuple(int(x) for x in pt) for pt in self.points)
        for pt in pts:
            if len(pt) != self.dim:
                raise ValueError(f"point {pt} does not have {self.dim} coordinates")
        if self.prime is not None:
            pts = tuple(tuple(x % self.prime for x in pt) for pt in pts)
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, points: Sequence[Union[AffinePoint, Sequence[int]]], dim: Optional[int] = None,
           prime: Optional[int] = None) -> "PointSet":
        coords = [pt.coords if isinstance(pt, AffinePoint) else tuple(pt) for pt in points]
        if dim is None:
            if not coords:
                raise ValueError("dimension of an empty point set must be given")
            dim = len(coords[0])
        return cls(tuple(coords), dim, prime)

    def __len__(self) -> int:
        return len(self.points)

    def reduced(self, prime: int) -> "PointSet":
        return PointSet(self.points, self.dim, prime)


@dataclass(frozen=True)
class ScanResult:
    """Outcome of one exhaustive subset scan."""

    kind: ViolationKind
    dim: int
    num_points: int
    prime: Optional[int]
    subset_size: int
    subsets_tested: int
    violation: Optional[Violation] = None
    max_incidence: Optional[int] = None
    incidence_exact: bool = True

    @property
    def passed(self) -> bool:
        return self.violation is None


def _integral_form(q: AnyForm, prime: Optional[int]) -> AnyForm:
    if prime is None:
        if not isinstance(q, RationalForm):
            raise FormMismatchError("integer verification needs a rational form")
        return RationalForm(q.dim, {k: Fraction(c) for k, c in q.integral_coeffs().items()})
    if not isinstance(q, QuadraticForm):
        raise FormMismatchError(f"verification over F_{prime} needs a form over F_{prime}")
    if q.prime != prime:
        raise FormMismatchError(f"form is over F_{q.prime}, points over F_{prime}")
    return q


def _form_value(q: AnyForm, x: Sequence[int]) -> int:
    value = evaluate(q, x)
    return int(value)


def hyperplane_rows(D: PointSet) -> list[list[int]]:
    return [[1, *pt] for pt in D.points]


def quadric_rows(D: PointSet, q: AnyForm) -> list[list[int]]:
    q = _integral_form(q, D.prime)
    if q.dim != D.dim:
        raise FormMismatchError(f"form in {q.dim} variables, points in dimension {D.dim}")
    rows = [[1, *pt, _form_value(q, pt)] for pt in D.points]
    if D.prime is not None:
        rows = [[x % D.prime for x in row] for row in rows]
    return rows


def bordered_determinant(rows: Sequence[Sequence[int]], prime: Optional[int] = None) -> int:
    """Exact determinant of the square matrix of rows (mod p if given)."""
    return linalg.determinant(rows, prime)


def choose_moduli(rows: Sequence[Sequence[int]], size: int, prime: Optional[int]) -> tuple[int, ...]:
    """Moduli for the vectorized scan.

    Over F_p this is (p,). Over Z the product of the returned primes is
    larger than twice the Hadamard bound of every size x size minor.
    """
    if prime is not None:
        return (prime,)
    norm2 = max((sum(x * x for x in row) for row in rows), default=1)
    bound_sq = 4 * norm2 ** size
    moduli: list[int] = []
    candidate = WORD_MODULUS_LIMIT
    while prod(moduli) ** 2 <= bound_sq:
        candidate = prevprime(candidate)
        moduli.append(candidate)
    return tuple(moduli)


@lru_cache(maxsize=None)
def _expansion(k: int, size: int):
    """Index arrays turning minors on k columns into minors on k+1 columns.

    A new last row r gives det(rows | S) = sum over c in S of
    (-1)^(k + pos(c)) r[c] det(old rows | S - c).
    """
    old = {s: i for i, s in enumerate(combinations(range(size), k))}
    new = list(combinations(range(size), k + 1))
    cols, targets, sources, signs = [], [], [], []
    for j, subset in enumerate(new):
        for pos, c in enumerate(subset):
            cols.append(c)
            targets.append(j)
            sources.append(old[subset[:pos] + subset[pos + 1:]])
            signs.append(-1 if (k + pos) % 2 else 1)
    return np.array(cols), np.array(targets), np.array(sources), np.array(signs), len(new)


@lru_cache(maxsize=None)
def _cofactor_layout(size: int):
    """For a < b: the complement of {a, b} among (size-2)-subsets and (-1)^(a+b+1)."""
    index = {s: i for i, s in enumerate(combinations(range(size), size - 2))}
    rows, cols, sources, signs = [], [], [], []
    for a, b in combinations(range(size), 2):
        rows.append(a)
        cols.append(b)
        sources.append(index[tuple(c for c in range(size) if c not in (a, b))])
        signs.append(-1 if (a + b + 1) % 2 else 1)
    return np.array(rows), np.array(cols), np.array(sources), np.array(signs)


def _extend(minors, rows, k: int, size: int, mods):
    """Minors of (prefix + r) for every row r in rows at once."""
    cols, targets, sources, signs, width = _expansion(k, size)
    expand = np.zeros((minors.shape[0], size, width), dtype=minors.dtype)
    expand[:, cols, targets] = signs * minors[:, sources]
    expand %= mods
    return (rows @ expand) % mods


def _cofactors(minors, size: int, mods):
    rows, cols, sources, signs = _cofactor_layout(size)
    c = np.zeros((minors.shape[0], size, size), dtype=minors.dtype)
    values = signs * minors[:, sources]
    c[:, rows, cols] = values
    c[:, cols, rows] = -values
    return c % mods


def _prefixes(stack, size: int, mods, first: Optional[Sequence[int]]) -> Iterator:
    """(prefix, cofactor matrix) for all prefixes of length size-2, lexicographically."""
    n = stack.shape[1]

    def walk(prefix: tuple[int, ...], minors):
        k = len(prefix)
        if k == size - 2:
            yield prefix, _cofactors(minors, size, mods)
            return
        start = prefix[-1] + 1 if prefix else 0
        candidates = list(range(start, n - (size - k) + 1))
        if k == 0 and first is not None:
            allowed = set(first)
            candidates = [i for i in candidates if i in allowed]
        if not candidates:
            return
        children = _extend(minors, stack[:, candidates, :], k, size, mods)
        for j, i in enumerate(candidates):
            yield from walk(prefix + (i,), children[:, j, :])

    root = np.ones((stack.shape[0], 1), dtype=stack.dtype)
    yield from walk((), root)


def _scan_share(
    rows: list[list[int]],
    moduli: tuple[int, ...],
    size: int,
    first: Optional[list[int]],
    count: bool,
    quadric: bool
) -> tuple[Optional[tuple[int, ...]], int]:
    """Scan the prefixes whose first index lies in `first` (all if None).

    Returns the first vanishing subset and, when counting, the largest
    number of rows on a hyperplane (or Q-quadric) through size-1 of them.
    """
    dtype = np.int64 if max(moduli) < WORD_MODULUS_LIMIT else object
    stack = np.array([[[x % m for x in row] for row in rows] for m in moduli], dtype=dtype)
    mods = np.array(moduli, dtype=dtype).reshape(-1, 1, 1)
    first_violation: Optional[tuple[int, ...]] = None
    best = 0

    for prefix, c in _prefixes(stack, size, mods, first):
        offset = prefix[-1] + 1 if prefix else 0
        tail = stack[:, offset:, :]
        functionals = (tail @ c) % mods
        against = stack if count else tail
        values = (functionals @ np.swapaxes(against, 1, 2)) % mods
        vanishing = (values == 0).all(axis=0)

        if first_violation is None:
            block = vanishing[:, offset:] if count else vanishing
            hits = np.argwhere(np.triu(block, 1))
            if len(hits):
                k, l = (int(x) for x in hits[0])
                first_violation = prefix + (offset + k, offset + l)
                if not count:
                    break

        if count:
            zero = (functionals == 0).all(axis=0)
            genuine = ~zero[:, -1] if quadric else ~zero.all(axis=1)
            if genuine.any():
                best = max(best, int(vanishing.sum(axis=1)[genuine].max()))

    return first_violation, best


def _scan(
    rows: list[list[int]],
    size: int,
    prime: Optional[int],
    count: bool,
    quadric: bool,
    threads: int
) -> tuple[Optional[tuple[int, ...]], int]:
    n = len(rows)
    if n < size:
        return None, 0
    moduli = choose_moduli(rows, size, prime)
    heads = list(range(0, n - size + 1))
    if threads <= 1 or len(heads) < 2:
        return _scan_share(rows, moduli, size, None, count, quadric)

    shares = [heads[j::threads] for j in range(min(threads, len(heads)))]
    with ProcessPoolExecutor(max_workers=len(shares)) as executor:
        futures = [executor.submit(_scan_share, rows, moduli, size, share, count, quadric)
                   for share in shares]
        results = [f.result() for f in futures]

    violations = [v for v, _ in results if v is not None]
    return (min(violations) if violations else None), max(best for _, best in results)


def lex_rank(subset: Sequence[int], n: int) -> int:
    """Position of a sorted subset among all subsets of its size in lexicographic order."""
    k = len(subset)
    rank = 0
    previous = -1
    for i, c in enumerate(subset):
        for skipped in range(previous + 1, c):
            rank += comb(n - 1 - skipped, k - 1 - i)
        previous = c
    return rank


def _witness(rows: list[list[int]], subset: tuple[int, ...], prime: Optional[int], kind: ViolationKind) -> Violation:
    matrix = [rows[i] for i in subset]
    det = bordered_determinant(matrix, prime)
    if det != 0:
        raise InconsistentClassificationError(
            f"subset {list(subset)} flagged by the scan has determinant {det}")
    kernel = linalg.kernel_vector(matrix, prime)
    if prime is None:
        witness = linalg.primitive_integer_vector(kernel)
    else:
        witness = [int(x) for x in kernel]
    return Violation(kind=kind, subset=list(subset), witness=witness, determinant=int(det))


def _domain(D: PointSet) -> str:
    return "over Z" if D.prime is None else f"over F_{D.prime}"


def _verdict(violation: Optional[Violation]) -> str:
    return "pass" if violation is None else f"violation {violation.subset}"


def _threads(threads: Optional[int]) -> int:
    return settings.verify_threads if threads is None else max(1, threads)


def _counting(D: PointSet, count_incidences: Optional[bool]) -> bool:
    if count_incidences is None:
        return len(D) <= settings.incidence_limit
    return count_incidences


def check_hyperplanes(
    D: PointSet,
    threads: Optional[int] = None,
    count_incidences: Optional[bool] = None
) -> ScanResult:
    """No d+1 points on a common hyperplane; first violation in lexicographic order."""
    d, n = D.dim, len(D)
    size = d + 1
    rows = hyperplane_rows(D)
    count = _counting(D, count_incidences)

    first, best = _scan(rows, size, D.prime, count, False, _threads(threads))
    violation = _witness(rows, first, D.prime, ViolationKind.HYPERPLANE) if first else None
    tested = lex_rank(first, n) + 1 if first else comb(n, size)

    exact = count
    if n <= d:
        best, exact = n, True
    elif count:
        if linalg.rank(rows, D.prime) <= d:
            best = n
        if violation is not None:
            best = max(best, size)
    elif violation is None:
        best, exact = d, True
    else:
        best = size

    logger.info(f"Hyperplane scan over {n} points {_domain(D)}: {_verdict(violation)}, "
                f"{tested} subsets tested")
    return ScanResult(ViolationKind.HYPERPLANE, d, n, D.prime, size, tested, violation, best, exact)


def check_quadrics(
    D: PointSet,
    q: AnyForm,
    certified: Optional[ScanResult] = None,
    threads: Optional[int] = None,
    count_incidences: Optional[bool] = None
) -> ScanResult:
    """No d+2 points on a common Q-quadric.

    Raises:
        ContractViolationError: `certified` is not a passing hyperplane scan of D
    """
    d, n = D.dim, len(D)
    if (
        certified is None
        or certified.kind != ViolationKind.HYPERPLANE
        or not certified.passed
        or (certified.dim, certified.num_points, certified.prime) != (d, n, D.prime)
    ):
        raise ContractViolationError("quadric check needs a passing hyperplane check of the same set")

    size = d + 2
    rows = quadric_rows(D, q)
    count = _counting(D, count_incidences)

    first, best = _scan(rows, size, D.prime, count, True, _threads(threads))
    violation = _witness(rows, first, D.prime, ViolationKind.QUADRIC) if first else None
    tested = lex_rank(first, n) + 1 if first else comb(n, size)

    exact = count
    if n <= d + 1:
        best, exact = n, True
    elif count:
        if violation is not None:
            best = max(best, size)
    elif violation is None:
        best, exact = d + 1, True
    else:
        best = size

    logger.info(f"Quadric scan over {n} points {_domain(D)}: {_verdict(violation)}, "
                f"{tested} subsets tested")
    return ScanResult(ViolationKind.QUADRIC, d, n, D.prime, size, tested, violation, best, exact)


def is_q_generic(
    D: PointSet,
    q: AnyForm,
    threads: Optional[int] = None,
    count_incidences: Optional[bool] = None
) -> Certificate:
    """Run both scans and assemble the certificate."""
    hyper = check_hyperplanes(D, threads, count_incidences)
    common = dict(dim=D.dim, num_points=len(D), prime=D.prime,
                  hyperplane_subsets=hyper.subsets_tested,
                  max_hyperplane_incidence=hyper.max_incidence)
    if not hyper.passed:
        return Certificate(status=CertificateStatus.HYPERPLANE_VIOLATION,
                           incidence_exact=hyper.incidence_exact,
                           violation=hyper.violation, **common)

    quad = check_quadrics(D, q, hyper, threads, count_incidences)
    status = CertificateStatus.PASS if quad.passed else CertificateStatus.QUADRIC_VIOLATION
    certificate = Certificate(status=status, quadric_subsets=quad.subsets_tested,
                              max_quadric_incidence=quad.max_incidence,
                              incidence_exact=hyper.incidence_exact and quad.incidence_exact,
                              violation=quad.violation, **common)
    if certificate.passed and len(D) >= D.dim + 2:
        assert certificate.subsets_tested == comb(len(D), D.dim + 1) + comb(len(D), D.dim + 2)
    return certificate


def unique_quadric_through(points: Sequence[Sequence[int]], q: AnyForm, prime: Optional[int] = None) -> list:
    """Coefficients (c_0, c_1, ..., c_d) of f = c_0 + sum c_i X_i with Q + f vanishing on the points.

    Raises:
        DegenerateConfigurationError: the d+1 points are affinely dependent
    """
    d = q.dim
    coords = [tuple(pt.coords) if isinstance(pt, AffinePoint) else tuple(pt) for pt in points]
    if len(coords) != d + 1:
        raise ValueError(f"exactly {d + 1} points determine a Q-quadric in dimension {d}")
    if isinstance(q, QuadraticForm):
        prime = q.prime
    matrix = [[1, *pt] for pt in coords]
    rhs = [-evaluate(q, pt) for pt in coords]
    try:
        return linalg.solve(matrix, rhs, prime)
    except SingularMatrixError:
        k = linalg.first_dependent(matrix, prime)
        raise DegenerateConfigurationError("points are affinely dependent", tuple(range(k + 1)))


def points_on_quadric(D: PointSet, q: AnyForm, f: Sequence) -> list[int]:
    """Indices of the points with Q(x) + f(x) = 0."""
    hits = []
    for index, pt in enumerate(D.points):
        value = evaluate(q, pt) + f[0] + sum(c * x for c, x in zip(f[1:], pt))
        if (value % D.prime if D.prime is not None else value) == 0:
            hits.append(index)
    return hits
