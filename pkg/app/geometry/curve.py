"""Veronese map, rational normal curves through ideal points, and the Q-generic construction."""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from app.core.errors import (
    DegenerateConfigurationError,
    FieldTooSmallError,
    InconsistentClassificationError,
    NotRichError,
)
from app.core.registry import sphere
from app.geometry.field import PrimeLike, as_modulus
from app.geometry.projective import (
    AffinePoint,
    ProjPoint,
    ProjTransform,
    apply,
    enumerate_projective_space,
    is_general_position,
    normalize,
    transform_mapping_points,
)
from app.geometry.quadform import (
    IrreducibleRank2,
    QuadraticForm,
    RichBasis,
    classify,
    ideal_points,
)

logger = logging.getLogger(__name__)


def veronese(d: int, r: ProjPoint) -> ProjPoint:
    """[x0 : x1] -> [x0^d : x0^(d-1) x1 : ... : x1^d]."""
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    if len(r.coords) != 2:
        raise ValueError(f"{r} is not a point of P^1")
    x0, x1 = r.coords
    p = r.prime
    return normalize([pow(x0, d - k, p) * pow(x1, k, p) for k in range(d + 1)], p)


def on_moment_curve(point: ProjPoint) -> bool:
    """Membership in the image of the Veronese map (2x2 Hankel minors vanish)."""
    y, p = point.coords, point.prime
    d = len(y) - 1
    return all(
        (y[i] * y[j + 1] - y[i + 1] * y[j]) % p == 0
        for i in range(d) for j in range(i + 1, d)
    )


def check_field_size(d: int, prime: PrimeLike) -> int:
    """The construction needs d <= p + 1."""
    p = as_modulus(prime)
    if d > p + 1:
        raise FieldTooSmallError(f"d = {d} exceeds |F_{p}| + 1 = {p + 1}")
    return p


def canonical_parameters(d: int, prime: PrimeLike) -> list[ProjPoint]:
    """R_i = [1 : i - 1] for i = 1..d, with R_d = [0 : 1] when d = p + 1."""
    p = check_field_size(d, prime)
    params = [ProjPoint((1, i), p) for i in range(min(d, p))]
    if d == p + 1:
        params.append(ProjPoint((0, 1), p))
    return params


@dataclass(frozen=True)
class RNC:
    """The rational normal curve phi(im nu_d), kept in parametric form."""

    dim: int
    transform: ProjTransform
    prime: int
    parameters: tuple[ProjPoint, ...] = ()
    targets: tuple[ProjPoint, ...] = ()

    def point(self, r: ProjPoint) -> ProjPoint:
        return apply(self.transform, veronese(self.dim, r))

    def contains(self, point: ProjPoint) -> bool:
        return on_moment_curve(apply(self.transform.inverse(), point))


def interpolate_rnc(targets: Sequence[ProjPoint]) -> RNC:
    """A rational normal curve through d points of P^d in general position.

    Raises:
        DegenerateConfigurationError: targets are not in general position
        FieldTooSmallError: d > p + 1
    """
    if not targets:
        raise ValueError("no interpolation targets")
    d = len(targets)
    p = targets[0].prime
    if any(t.dim != d for t in targets):
        raise ValueError(f"{d} targets must lie in P^{d}")
    params = canonical_parameters(d, p)
    if not is_general_position(targets):
        raise DegenerateConfigurationError("interpolation targets are not in general position")

    sources = [veronese(d, r) for r in params]
    transform = transform_mapping_points(sources, targets)
    curve = RNC(d, transform, p, tuple(params), tuple(targets))

    for r, target in zip(params, targets):
        if curve.point(r) != target or not curve.contains(target):
            raise InconsistentClassificationError(f"interpolated curve misses {target}")
    return curve


def enumerate_curve(curve: RNC) -> list[ProjPoint]:
    """The p + 1 curve points, in parameter order [1:0], [1:1], ..., [1:p-1], [0:1]."""
    return [curve.point(r) for r in enumerate_projective_space(1, curve.prime)]


@dataclass(frozen=True)
class Construction:
    """Affine part of a rational normal curve whose ideal points are P_1..P_d."""

    points: tuple[AffinePoint, ...]
    ideal_points: tuple[ProjPoint, ...]
    curve: RNC
    form: QuadraticForm
    prime: int
    basis: RichBasis

    @property
    def dim(self) -> int:
        return self.form.dim

    @property
    def size(self) -> int:
        return len(self.points)

    def coordinates(self) -> list[tuple[int, ...]]:
        return [pt.coords for pt in self.points]


def not_rich_message(q: QuadraticForm, cls: IrreducibleRank2) -> str:
    """Explain why the construction is infeasible for this form."""
    p = q.prime
    message = (
        f"{q} is irreducible of rank 2: discriminant {cls.discriminant} is a non-square mod {p} "
        f"(Euler witness {cls.euler_witness} = -1); only forms that are not irreducible "
        f"of rank 2 admit the construction"
    )
    if q.dim == 2 and q.coeffs == {key: int(c) for key, c in sphere(2).items()} and p % 4 == 3:
        message += f"; for circles this is exactly p = 3 (mod 4), and {p} = 3 (mod 4)"
    return message


def construct_q_generic(
    q: QuadraticForm,
    d: Optional[int] = None,
    seed: Optional[int] = None
) -> Construction:
    """Q-generic set of size p + 1 - d in F_p^d.

    Raises:
        NotRichError: the form is irreducible of rank 2
        FieldTooSmallError: d > p + 1
    """
    d = q.dim if d is None else d
    if d != q.dim:
        raise ValueError(f"form has {q.dim} variables but d = {d}")
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    p = check_field_size(d, q.prime)

    cls = classify(q, seed=seed)
    if isinstance(cls, IrreducibleRank2):
        raise NotRichError(not_rich_message(q, cls))

    targets = ideal_points(cls.basis)
    curve = interpolate_rnc(targets)
    on_curve = enumerate_curve(curve)

    affine = tuple(pt.affine() for pt in on_curve if not pt.is_ideal)
    at_infinity = {pt for pt in on_curve if pt.is_ideal}
    if at_infinity != set(targets) or len(affine) != p + 1 - d:
        raise InconsistentClassificationError(
            f"curve has {len(at_infinity)} ideal points and {len(affine)} affine points")

    logger.info(f"Constructed {len(affine)} points in F_{p}^{d} for {q}")
    return Construction(affine, tuple(targets), curve, q, p, cls.basis)
