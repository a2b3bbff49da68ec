"""Quadratic forms over F_p and Q: evaluation, rank, classification, rich bases.

A form is stored as its upper-triangular coefficient map
(i, j) -> lambda_ij with 1 <= i <= j <= d.
"""
import logging
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Mapping, Optional, Sequence, Union

from app.config import settings
from app.core.errors import (
    FormParseError,
    InconsistentClassificationError,
    ZeroFormError,
)
from app.core.registry import form_registry
from app.geometry import linalg
from app.geometry.field import as_modulus, is_square_mod
from app.geometry.projective import ProjPoint, enumerate_projective_space, normalize

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]


def _check_indices(dim: int, coeffs: Mapping[tuple[int, int], object]) -> None:
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    for (i, j) in coeffs:
        if not 1 <= i <= j <= dim:
            raise FormParseError(f"coefficient index ({i},{j}) outside 1 <= i <= j <= {dim}")


@dataclass(frozen=True)
class QuadraticForm:
    """Quadratic form over F_p with residues in [0, p)."""

    dim: int
    coeffs: Mapping[tuple[int, int], int]
    prime: int

    def __post_init__(self):
        p = as_modulus(self.prime)
        _check_indices(self.dim, self.coeffs)
        reduced = {key: int(c) % p for key, c in sorted(self.coeffs.items())}
        reduced = {key: c for key, c in reduced.items() if c}
        if not reduced:
            raise ZeroFormError(f"the zero form over F_{p} is not allowed")
        object.__setattr__(self, "prime", p)
        object.__setattr__(self, "coeffs", reduced)

    @property
    def terms(self) -> list[tuple[int, int, int]]:
        """Zero-based (i, j, c) triples."""
        return [(i - 1, j - 1, c) for (i, j), c in self.coeffs.items()]

    def __call__(self, v: Sequence[int]) -> int:
        return evaluate(self, v)

    def __str__(self) -> str:
        return describe_form(self.coeffs) + f" over F_{self.prime}"


@dataclass(frozen=True)
class RationalForm:
    """Quadratic form with exact rational coefficients."""

    dim: int
    coeffs: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        _check_indices(self.dim, self.coeffs)
        cleaned = {key: Fraction(c) for key, c in sorted(self.coeffs.items())}
        cleaned = {key: c for key, c in cleaned.items() if c}
        if not cleaned:
            raise ZeroFormError("the zero form is not allowed")
        object.__setattr__(self, "coeffs", cleaned)

    @property
    def terms(self) -> list[tuple[int, int, Fraction]]:
        return [(i - 1, j - 1, c) for (i, j), c in self.coeffs.items()]

    def integral_coeffs(self) -> dict[tuple[int, int], int]:
        """Coefficients scaled by the positive rational making them coprime integers."""
        denominator = 1
        for c in self.coeffs.values():
            denominator = denominator * c.denominator // gcd(denominator, c.denominator)
        ints = {key: int(c * denominator) for key, c in self.coeffs.items()}
        content = 0
        for c in ints.values():
            content = gcd(content, c)
        return {key: c // content for key, c in ints.items()}

    def as_rows(self) -> list[list[int]]:
        """[[i, j, numerator, denominator], ...] for serialization."""
        return [[i, j, c.numerator, c.denominator] for (i, j), c in self.coeffs.items()]

    @classmethod
    def from_rows(cls, dim: int, rows: Sequence[Sequence[int]]) -> "RationalForm":
        coeffs: dict[tuple[int, int], Fraction] = {}
        for row in rows:
            if len(row) != 4 or row[3] == 0:
                raise FormParseError(f"malformed form row {row!r}")
            i, j, num, den = (int(x) for x in row)
            coeffs[(i, j)] = coeffs.get((i, j), Fraction(0)) + Fraction(num, den)
        return cls(dim, coeffs)

    def __call__(self, v: Sequence) -> Fraction:
        return evaluate(self, v)

    def __str__(self) -> str:
        return describe_form(self.coeffs)


AnyForm = Union[QuadraticForm, RationalForm]


def describe_form(coeffs: Mapping[tuple[int, int], object]) -> str:
    """Human readable rendering, e.g. 'X1^2 + 2*X1*X2'."""
    parts = []
    for (i, j), c in coeffs.items():
        monomial = f"X{i}^2" if i == j else f"X{i}*X{j}"
        parts.append(monomial if c == 1 else f"{c}*{monomial}")
    return " + ".join(parts)


_TRIPLE = re.compile(r"^\s*(\d+)\s*,\s*(\d+)\s*,\s*([+-]?\d+(?:/\d+)?)\s*$")


def parse_form(spec: str, dim: int) -> RationalForm:
    """Parse a form spec: a registered preset name or 'i,j,c;i,j,c;...'.

    c is an integer or num/den; repeated (i, j) pairs are summed.

    Raises:
        FormParseError: malformed spec
        ZeroFormError: spec describes the zero form
    """
    text = spec.strip()
    if not text:
        raise FormParseError("empty form spec")

    factory = form_registry.get(text)
    if factory is not None:
        return RationalForm(dim, factory(dim))

    coeffs: dict[tuple[int, int], Fraction] = {}
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        match = _TRIPLE.match(chunk)
        if not match:
            raise FormParseError(f"cannot parse term {chunk.strip()!r}; expected 'i,j,c'")
        i, j = int(match.group(1)), int(match.group(2))
        try:
            c = Fraction(match.group(3))
        except ZeroDivisionError:
            raise FormParseError(f"zero denominator in term {chunk.strip()!r}")
        if i > j:
            raise FormParseError(f"term ({i},{j}) must have i <= j")
        coeffs[(i, j)] = coeffs.get((i, j), Fraction(0)) + c
    return RationalForm(dim, coeffs)


def evaluate(q: AnyForm, v: Sequence):
    """Q(v) = sum_{i <= j} lambda_ij v_i v_j."""
    if len(v) != q.dim:
        raise ValueError(f"vector of length {len(v)} for a form in {q.dim} variables")
    total = sum(c * v[i] * v[j] for i, j, c in q.terms)
    if isinstance(q, QuadraticForm):
        return int(total) % q.prime
    return total


def bilinear(q: QuadraticForm, u: Sequence[int], w: Sequence[int]) -> int:
    """Polar form Q(u + w) - Q(u) - Q(w)."""
    return (evaluate(q, [a + b for a, b in zip(u, w)]) - evaluate(q, u) - evaluate(q, w)) % q.prime


def gram_matrix(q: AnyForm) -> list[list]:
    """Symmetric matrix G with v^T G v = Q(v) (off-diagonal entries halved)."""
    if isinstance(q, QuadraticForm):
        p = q.prime
        half = pow(2, -1, p)
        g = [[0] * q.dim for _ in range(q.dim)]
        for i, j, c in q.terms:
            if i == j:
                g[i][i] = c
            else:
                g[i][j] = g[j][i] = c * half % p
        return g
    g = [[Fraction(0)] * q.dim for _ in range(q.dim)]
    for i, j, c in q.terms:
        if i == j:
            g[i][i] = c
        else:
            g[i][j] = g[j][i] = c / 2
    return g


def _modulus(q: AnyForm) -> Optional[int]:
    return q.prime if isinstance(q, QuadraticForm) else None


def gram_rank(q: AnyForm) -> int:
    """Rank of the Gram matrix (odd characteristic or Q)."""
    return linalg.rank(gram_matrix(q), _modulus(q))


def diagonalize(q: AnyForm) -> list:
    """Diagonal of a congruent diagonal Gram matrix (symmetric elimination).

    Valid in odd characteristic: a zero pivot with a nonzero off-diagonal
    entry g_kj is repaired by e_k += e_j, which makes the pivot 2 g_kj.
    """
    mod = _modulus(q)
    g = linalg.to_matrix(gram_matrix(q), mod)
    n = len(g)

    def red(x):
        return x % mod if mod else x

    def add_index(k: int, j: int, factor) -> None:
        # e_k += factor * e_j applied as a congruence
        for c in range(n):
            g[k][c] = red(g[k][c] + factor * g[j][c])
        for r in range(n):
            g[r][k] = red(g[r][k] + factor * g[r][j])

    diagonal = []
    for k in range(n):
        if g[k][k] == 0:
            swap = next((j for j in range(k + 1, n) if g[j][j] != 0), None)
            if swap is not None:
                g[k], g[swap] = g[swap], g[k]
                for row in g:
                    row[k], row[swap] = row[swap], row[k]
            else:
                partner = next((j for j in range(k + 1, n) if g[k][j] != 0), None)
                if partner is not None:
                    add_index(k, partner, 1)
        pivot = g[k][k]
        if pivot != 0:
            inv = pow(pivot, -1, mod) if mod else 1 / pivot
            for i in range(k + 1, n):
                if g[i][k] != 0:
                    add_index(i, k, red(-g[i][k] * inv))
        diagonal.append(pivot)
    return diagonal


def rank2_discriminant(q: AnyForm):
    """Discriminant of the rank-2 part lambda11 L1^2 + lambda22 L2^2, or None if rank != 2.

    With the Gram matrix brought to diagonal form the cross term vanishes,
    so Delta = -4 lambda11 lambda22; its square class is basis independent.
    """
    nonzero = [x for x in diagonalize(q) if x != 0]
    if len(nonzero) != 2:
        return None
    a, b = nonzero
    if isinstance(q, QuadraticForm):
        return -4 * a * b % q.prime
    return -4 * a * b


@dataclass(frozen=True)
class RichBasis:
    """Basis v_1..v_d with Q(v_i) = 0 for i < d and Q(v_d) != 0."""

    vectors: tuple[Vector, ...]
    prime: int

    def check(self, q: QuadraticForm) -> bool:
        """Re-evaluate all three invariants from scratch."""
        d = q.dim
        if len(self.vectors) != d or linalg.rank(self.vectors, self.prime) != d:
            return False
        values = [evaluate(q, v) for v in self.vectors]
        return all(x == 0 for x in values[:-1]) and values[-1] != 0


@dataclass(frozen=True)
class NotRich:
    """No rich basis exists (or none was found)."""

    reason: str = ""


@dataclass(frozen=True)
class Rich:
    basis: RichBasis


@dataclass(frozen=True)
class IrreducibleRank2:
    discriminant: int
    prime: int

    @property
    def euler_witness(self) -> int:
        """Delta^((p-1)/2) mod p; equals p - 1 for a non-square."""
        return pow(self.discriminant, (self.prime - 1) // 2, self.prime)


FormClass = Union[Rich, IrreducibleRank2]


def projective_vectors(d: int, p: int) -> Iterator[Vector]:
    """Leading-one representatives of the lines of F_p^d."""
    for point in enumerate_projective_space(d - 1, p):
        yield point.coords


def isotropic_vectors(q: QuadraticForm) -> Iterator[Vector]:
    """Normalized nonzero v with Q(v) = 0, in enumeration order."""
    for v in projective_vectors(q.dim, q.prime):
        if evaluate(q, v) == 0:
            yield v


def zero_count(q: QuadraticForm) -> int:
    """|{v in F_p^d : Q(v) = 0}|, the origin included."""
    lines = sum(1 for _ in isotropic_vectors(q))
    return 1 + lines * (q.prime - 1)


def ideal_quadric_points(q: QuadraticForm) -> list[ProjPoint]:
    """Points [0:v] shared by the closure of every Q-quadric."""
    return [ProjPoint((0,) + v, q.prime) for v in isotropic_vectors(q)]


def _extends(family: list[Vector], v: Sequence[int], p: int) -> bool:
    return linalg.rank(family + [tuple(v)], p) > len(family)


def _rich_basis_enumerate(q: QuadraticForm) -> Union[RichBasis, NotRich]:
    d, p = q.dim, q.prime
    family: list[Vector] = []
    # greedy is exhaustive here: independent isotropic vectors form a matroid
    for v in isotropic_vectors(q):
        if len(family) == d - 1:
            break
        if _extends(family, v, p):
            family.append(v)
    if len(family) < d - 1:
        return NotRich(f"isotropic vectors span only {len(family)} < {d - 1} dimensions")

    for v in projective_vectors(d, p):
        if evaluate(q, v) != 0 and _extends(family, v, p):
            return RichBasis(tuple(family) + (v,), p)
    return NotRich("no anisotropic vector outside the isotropic span")


def _pencil_roots(q: QuadraticForm, u: Vector, w: Vector) -> Iterator[Vector]:
    """Isotropic points of the pencil {s u + w} plus u itself."""
    p = q.prime
    if evaluate(q, u) == 0:
        yield u
    a, b, c = evaluate(q, u), bilinear(q, u, w), evaluate(q, w)
    if a != 0 and not is_square_mod(b * b - 4 * a * c, p):
        return
    for s in range(p):
        if (a * s * s + b * s + c) % p == 0:
            yield tuple((s * x + y) % p for x, y in zip(u, w))


def _rich_basis_random(q: QuadraticForm, seed: int, attempts: int) -> Union[RichBasis, NotRich]:
    d, p = q.dim, q.prime
    rng = random.Random(seed)

    def draw() -> Vector:
        return tuple(rng.randrange(p) for _ in range(d))

    family: list[Vector] = []
    for _ in range(attempts):
        if len(family) == d - 1:
            break
        for v in _pencil_roots(q, draw(), draw()):
            if any(v) and _extends(family, v, p):
                family.append(v)
                break
    if len(family) < d - 1:
        return NotRich(f"random search found only {len(family)} independent isotropic vectors")

    for _ in range(attempts):
        v = draw()
        if evaluate(q, v) != 0 and _extends(family, v, p):
            return RichBasis(tuple(family) + (v,), p)
    return NotRich("random search found no anisotropic completion")


def rich_basis(
    q: QuadraticForm,
    seed: Optional[int] = None,
    enumeration_limit: Optional[int] = None
) -> Union[RichBasis, NotRich]:
    """Search a basis with d - 1 isotropic vectors and one anisotropic vector.

    Small spaces (p^d <= enumeration_limit) are enumerated; larger ones
    are sampled through random 2-dimensional slices with a fixed seed.
    """
    seed = settings.default_seed if seed is None else seed
    limit = settings.enumeration_limit if enumeration_limit is None else enumeration_limit
    if q.prime ** q.dim <= limit:
        result = _rich_basis_enumerate(q)
    else:
        delta = rank2_discriminant(q)
        if delta is not None and not is_square_mod(delta, q.prime):
            return NotRich(f"irreducible of rank 2 (discriminant {delta} is a non-square)")
        result = _rich_basis_random(q, seed, settings.random_search_attempts)
    if isinstance(result, RichBasis) and not result.check(q):
        raise InconsistentClassificationError(f"search returned an invalid basis {result.vectors}")
    return result


def classify(q: QuadraticForm, seed: Optional[int] = None) -> FormClass:
    """Either Rich(basis) or IrreducibleRank2(Delta); exactly one holds over F_p."""
    if q.dim < 2:
        raise ValueError("classification needs d >= 2")
    delta = rank2_discriminant(q)
    if delta is not None and not is_square_mod(delta, q.prime):
        logger.info(f"{q}: irreducible of rank 2, discriminant {delta}")
        return IrreducibleRank2(delta, q.prime)

    result = rich_basis(q, seed=seed)
    if isinstance(result, NotRich):
        raise InconsistentClassificationError(
            f"{q} is not irreducible of rank 2 but no rich basis was found: {result.reason}")
    logger.info(f"{q}: rich, basis {list(result.vectors)}")
    return Rich(result)


def ideal_points(basis: RichBasis) -> list[ProjPoint]:
    """P_i = [0 : v_i]; the anisotropic vector gives the last point."""
    return [normalize((0,) + tuple(v), basis.prime) for v in basis.vectors]
