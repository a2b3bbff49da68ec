"""Reduction of rational forms mod p, prime selection, and lifting to the integer grid."""
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd, isqrt
from typing import Mapping, Optional

from app.core.errors import (
    FormMismatchError,
    InconsistentClassificationError,
    PrimeNotFoundError,
    ZeroFormError,
)
from app.core.pipeline import Pipeline, Stage
from app.geometry.curve import Construction, construct_q_generic
from app.geometry.field import Prime, PrimeLike, as_modulus, primes_below
from app.geometry.quadform import (
    IrreducibleRank2,
    QuadraticForm,
    RationalForm,
    classify,
    rank2_discriminant,
)
from app.geometry.verify import PointSet, is_q_generic
from app.models.certificate import Certificate
from app.models.state import PipelineState, StageLog

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]

__all__ = [
    "GridConstruction",
    "RationalForm",
    "choose_prime",
    "construct_grid",
    "is_rank2_irreducible",
    "lift_to_grid",
    "rational_discriminant",
    "reduce_form",
    "reduce_mod_p",
]


def reduce_mod_p(poly: Mapping[Monomial, Fraction], prime: PrimeLike) -> dict[Monomial, int]:
    """Scale to coprime integer coefficients (positive factor), then reduce.

    Polynomials map exponent tuples to rational coefficients; the zero
    polynomial maps to the zero polynomial.
    """
    p = as_modulus(prime)
    coeffs = {m: Fraction(c) for m, c in poly.items() if c}
    if not coeffs:
        return {}
    denominator = 1
    for c in coeffs.values():
        denominator = denominator * c.denominator // gcd(denominator, c.denominator)
    ints = {m: int(c * denominator) for m, c in coeffs.items()}
    content = 0
    for c in ints.values():
        content = gcd(content, c)
    reduced = {m: (c // content) % p for m, c in sorted(ints.items())}
    return {m: c for m, c in reduced.items() if c}


def _as_polynomial(q: RationalForm) -> dict[Monomial, Fraction]:
    poly: dict[Monomial, Fraction] = {}
    for (i, j), c in q.coeffs.items():
        exponents = [0] * q.dim
        exponents[i - 1] += 1
        exponents[j - 1] += 1
        poly[tuple(exponents)] = c
    return poly


def reduce_form(q: RationalForm, prime: PrimeLike) -> QuadraticForm:
    """reduce_mod_p applied to a quadratic form."""
    p = as_modulus(prime)
    reduced = reduce_mod_p(_as_polynomial(q), p)
    coeffs: dict[tuple[int, int], int] = {}
    for exponents, c in reduced.items():
        indices = [k + 1 for k, e in enumerate(exponents) for _ in range(e)]
        coeffs[(indices[0], indices[1])] = c
    return QuadraticForm(q.dim, coeffs, p)


def rational_discriminant(q: RationalForm) -> Optional[int]:
    """Integer in the square class of the rank-2 discriminant over Q, or None if rank != 2."""
    delta = rank2_discriminant(q)
    if delta is None:
        return None
    delta = Fraction(delta)
    return delta.numerator * delta.denominator


def _is_rational_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def is_rank2_irreducible(q: RationalForm) -> bool:
    """Rank 2 over Q with a non-square discriminant."""
    delta = rational_discriminant(q)
    return delta is not None and not _is_rational_square(delta)


def choose_prime(n: int, q: RationalForm, seed: Optional[int] = None) -> Prime:
    """Largest prime p <= n whose reduction of Q is rich.

    Forms irreducible of rank 2 over Q are only tried at p = 1 (mod 4|Delta|),
    where Delta becomes a square.

    Raises:
        PrimeNotFoundError: no qualifying prime in [3, n]
    """
    residue_class = None
    if is_rank2_irreducible(q):
        delta = rational_discriminant(q)
        residue_class = (1, 4 * abs(delta))
        logger.info(f"{q} is irreducible of rank 2 over Q (discriminant {delta}); "
                    f"scanning p = 1 (mod {4 * abs(delta)})")

    rejected: list[tuple[int, str]] = []
    for prime in primes_below(n, residue_class):
        p = int(prime)
        if q.dim > p + 1:
            rejected.append((p, f"field too small for d = {q.dim}"))
            continue
        try:
            reduced = reduce_form(q, p)
        except ZeroFormError:
            rejected.append((p, "reduction vanishes"))
            continue
        if isinstance(classify(reduced, seed=seed), IrreducibleRank2):
            rejected.append((p, "reduction is irreducible of rank 2"))
            logger.info(f"Rejected p={p}: {reduced} is irreducible of rank 2")
            continue
        logger.info(f"Chose p={p} <= {n} for {q}")
        return prime

    clause = f" with p = 1 (mod {residue_class[1]})" if residue_class else ""
    raise PrimeNotFoundError(f"no prime{clause} with a rich reduction of {q}", (3, n), rejected)


@dataclass(frozen=True)
class GridConstruction:
    """Integer lift of a field construction: coordinates in {1, ..., p}."""

    points: tuple[tuple[int, ...], ...]
    prime: int
    form: RationalForm
    reduced_form: QuadraticForm
    provenance: Construction
    grid_size: Optional[int] = None
    certificate: Optional[Certificate] = None
    field_certificate: Optional[Certificate] = None
    stage_logs: list[StageLog] = field(default_factory=list, compare=False)

    @property
    def dim(self) -> int:
        return self.form.dim

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def deficit(self) -> Optional[int]:
        """n - |D| for grid runs."""
        return None if self.grid_size is None else self.grid_size - self.size

    def point_set(self) -> PointSet:
        return PointSet(self.points, self.dim)


def lift_to_grid(c: Construction, q: RationalForm) -> GridConstruction:
    """Representatives in {1..p}^d of the field points (residue 0 becomes p).

    Raises:
        FormMismatchError: the reduction of Q mod p is not the form the construction used
    """
    p = c.prime
    if q.dim != c.dim:
        raise FormMismatchError(f"form in {q.dim} variables, construction in dimension {c.dim}")
    reduced = reduce_form(q, p)
    if reduced != c.form:
        raise FormMismatchError(f"{q} reduces to {reduced}, construction used {c.form}")
    points = tuple(tuple(x if x else p for x in pt.coords) for pt in c.points)
    return GridConstruction(points, p, q, reduced, c)


def _choose_prime_stage(state: PipelineState, seed: Optional[int] = None) -> dict:
    return {"prime": choose_prime(state["n"], state["form"], seed)}


def _reduce_form_stage(state: PipelineState) -> dict:
    return {"reduced_form": reduce_form(state["form"], state["prime"])}


def _construct_stage(state: PipelineState, seed: Optional[int] = None) -> dict:
    reduced = state["reduced_form"]
    return {"construction": construct_q_generic(reduced, reduced.dim, seed=seed)}


def _lift_stage(state: PipelineState) -> dict:
    grid = lift_to_grid(state["construction"], state["form"])
    return {"grid": replace(grid, grid_size=state["n"])}


def _certify_stage(state: PipelineState, threads: Optional[int] = None) -> dict:
    grid: GridConstruction = state["grid"]
    construction: Construction = state["construction"]
    field_points = PointSet.of(construction.points, construction.dim, construction.prime)
    field_certificate = is_q_generic(field_points, grid.reduced_form, threads=threads)
    certificate = is_q_generic(grid.point_set(), grid.form, threads=threads)
    if certificate.passed and not field_certificate.passed:
        raise InconsistentClassificationError(
            f"grid set passes but its reduction mod {grid.prime} fails: {field_certificate.violation}")
    return {"certificate": certificate, "field_certificate": field_certificate}


def construct_grid(
    n: int,
    d: int,
    q: RationalForm,
    seed: Optional[int] = None,
    certify: bool = True,
    threads: Optional[int] = None
) -> GridConstruction:
    """choose_prime -> reduce_form -> construct_q_generic -> lift_to_grid [-> certify].

    The result has p + 1 - d points in {1..p}^d with p = choose_prime(n, Q).
    """
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    if q.dim != d:
        raise FormMismatchError(f"form in {q.dim} variables but d = {d}")

    stages = [
        Stage("choose_prime", _choose_prime_stage, {"seed": seed},
              summarize=lambda u: {"prime": int(u["prime"])}),
        Stage("reduce_form", _reduce_form_stage,
              summarize=lambda u: {"form": str(u["reduced_form"])}),
        Stage("construct_q_generic", _construct_stage, {"seed": seed},
              summarize=lambda u: {"points": u["construction"].size}),
        Stage("lift_to_grid", _lift_stage,
              summarize=lambda u: {"points": u["grid"].size}),
    ]
    if certify:
        stages.append(Stage("certify", _certify_stage, {"threads": threads},
                            summarize=lambda u: {"status": u["certificate"].status.value,
                                                 "field_status": u["field_certificate"].status.value}))

    state, logs = Pipeline(stages).run(PipelineState({"n": n, "form": q}))
    grid = replace(
        state["grid"],
        certificate=state.get("certificate"),
        field_certificate=state.get("field_certificate"),
        stage_logs=logs,
    )
    logger.info(f"Grid construction n={n}, d={d}: p={grid.prime}, {grid.size} points, "
                f"deficit {grid.deficit}")
    return grid
