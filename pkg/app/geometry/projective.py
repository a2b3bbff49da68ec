"""Points of P^d(F_p), general position and projective linear maps."""
import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from app.core.errors import DegenerateConfigurationError, SingularMatrixError
from app.geometry import linalg
from app.geometry.field import FieldElement, PrimeLike, as_modulus

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProjPoint:
    """Canonical representative of a point of P^d(F_p).

    The first nonzero coordinate is 1, so equality of points is equality
    of coordinate tuples.
    """

    coords: tuple[int, ...]
    prime: int

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    @property
    def is_ideal(self) -> bool:
        """Lies on the hyperplane X_0 = 0."""
        return self.coords[0] == 0

    def affine(self) -> "AffinePoint":
        """Dehomogenize (x_1/x_0, ..., x_d/x_0); only defined off X_0 = 0."""
        if self.is_ideal:
            raise ValueError(f"{self} is a point at infinity")
        # leading-one normalization already makes x_0 = 1
        return AffinePoint(self.coords[1:], self.prime)

    def __str__(self) -> str:
        return "[" + ":".join(str(x) for x in self.coords) + "]"


@dataclass(frozen=True)
class AffinePoint:
    """A point of F_p^d (prime set) or of Z^d (prime None)."""

    coords: tuple[int, ...]
    prime: Optional[int] = None

    @property
    def dim(self) -> int:
        return len(self.coords)

    def homogenize(self) -> ProjPoint:
        """The point [1 : x_1 : ... : x_d] of the projective closure."""
        if self.prime is None:
            raise ValueError("integer points have no projective closure over F_p")
        return ProjPoint((1,) + tuple(x % self.prime for x in self.coords), self.prime)


def _residues(raw: Sequence, prime: Optional[PrimeLike]) -> tuple[tuple[int, ...], int]:
    if prime is None:
        moduli = {x.modulus for x in raw if isinstance(x, FieldElement)}
        if len(moduli) != 1:
            raise ValueError("modulus must be given for integer coordinates")
        p = moduli.pop()
    else:
        p = as_modulus(prime)
    return tuple(int(x) % p for x in raw), p


def normalize(raw: Sequence, prime: Optional[PrimeLike] = None) -> ProjPoint:
    """Scale a nonzero vector so its first nonzero entry is 1.

    Raises:
        ValueError: all entries are zero
    """
    coords, p = _residues(raw, prime)
    lead = next((x for x in coords if x != 0), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    inv = pow(lead, -1, p)
    return ProjPoint(tuple(x * inv % p for x in coords), p)


def enumerate_projective_space(d: int, prime: PrimeLike) -> Iterator[ProjPoint]:
    """All (p^(d+1) - 1)/(p - 1) points of P^d(F_p).

    Ordered by the position of the leading one, then lexicographically.
    """
    p = as_modulus(prime)
    for lead in range(d + 1):
        for tail in itertools.product(range(p), repeat=d - lead):
            yield ProjPoint((0,) * lead + (1,) + tail, p)


def is_general_position(points: Sequence[ProjPoint]) -> bool:
    """k+1 points span a k-dimensional projective subspace."""
    if not points:
        return True
    p = points[0].prime
    return linalg.rank([pt.coords for pt in points], p) == len(points)


def _dependent_subset(points: Sequence[ProjPoint]) -> tuple[int, ...]:
    p = points[0].prime
    k = linalg.first_dependent([pt.coords for pt in points], p)
    return tuple(range(k + 1)) if k is not None else ()


@dataclass(frozen=True)
class ProjTransform:
    """Invertible (d+1)x(d+1) matrix acting on P^d(F_p)."""

    matrix: tuple[tuple[int, ...], ...]
    prime: int

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise ValueError("transform matrix must be square")
        if linalg.determinant(self.matrix, self.prime) == 0:
            raise SingularMatrixError("projective transform must be invertible")

    @property
    def dim(self) -> int:
        return len(self.matrix) - 1

    @classmethod
    def identity(cls, d: int, prime: PrimeLike) -> "ProjTransform":
        p = as_modulus(prime)
        return cls(tuple(tuple(int(i == j) for j in range(d + 1)) for i in range(d + 1)), p)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], prime: PrimeLike) -> "ProjTransform":
        p = as_modulus(prime)
        return cls(tuple(tuple(int(x) % p for x in row) for row in rows), p)

    def inverse(self) -> "ProjTransform":
        return ProjTransform.from_rows(linalg.inverse(self.matrix, self.prime), self.prime)

    def __call__(self, point: ProjPoint) -> ProjPoint:
        return apply(self, point)


def apply(t: ProjTransform, point: ProjPoint) -> ProjPoint:
    """Image of a point; independent of the representative."""
    if len(point.coords) != len(t.matrix):
        raise ValueError(f"dimension mismatch: P^{t.dim} transform on {point}")
    return normalize(linalg.mat_vec(t.matrix, point.coords, t.prime), t.prime)


def transform_mapping_points(
    sources: Sequence[ProjPoint],
    targets: Sequence[ProjPoint]
) -> ProjTransform:
    """A projective map sending sources[i] to targets[i].

    Both lists are completed to bases by appending the first standard basis
    vectors outside their spans, and the map sending one completed basis
    to the other (all scalars 1) is returned.

    Raises:
        DegenerateConfigurationError: sources or targets not in general position
    """
    if len(sources) != len(targets):
        raise ValueError("sources and targets must have equal length")
    if not sources:
        raise ValueError("at least one point is required")
    p = sources[0].prime
    n = len(sources[0].coords)
    if len(sources) > n:
        raise ValueError(f"at most {n} points can be pinned in P^{n - 1}")

    for name, pts in (("sources", sources), ("targets", targets)):
        if not is_general_position(pts):
            raise DegenerateConfigurationError(
                f"{name} are not in general position", _dependent_subset(pts))

    src = linalg.standard_completion([pt.coords for pt in sources], n, p)
    dst = linalg.standard_completion([pt.coords for pt in targets], n, p)

    # columns are basis vectors: T . S = D  =>  T = D . S^-1
    s_cols = [list(col) for col in zip(*src)]
    d_cols = [list(col) for col in zip(*dst)]
    matrix = linalg.multiply(d_cols, linalg.inverse(s_cols, p), p)
    transform = ProjTransform.from_rows(matrix, p)
    logger.debug(f"Interpolating transform for {len(sources)} points in P^{n - 1}(F_{p})")
    return transform
