"""Construction and certification runs shared by the CLI and the HTTP API."""
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from app.config import settings
from app.geometry.curve import construct_q_generic
from app.geometry.field import Prime
from app.geometry.lift import construct_grid, reduce_form
from app.geometry.quadform import RationalForm, parse_form
from app.geometry.verify import PointSet, is_q_generic
from app.models.certificate import Certificate
from app.models.pointset import PointSetFile, PointSetMode
from app.models.state import StageLog

logger = logging.getLogger(__name__)


@dataclass
class ConstructionRun:
    """A constructed point set, its file representation and its certificate."""

    data: PointSetFile
    certificate: Certificate
    form: RationalForm
    stage_logs: list[StageLog] = field(default_factory=list)


def construct_point_set(
    dim: int,
    form_spec: str,
    grid_size: Optional[int] = None,
    prime: Optional[int] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None
) -> ConstructionRun:
    """Grid mode (grid_size) runs the lifting pipeline; field mode (prime) stays over F_p."""
    if (grid_size is None) == (prime is None):
        raise ValueError("exactly one of grid size or prime must be given")
    seed = settings.default_seed if seed is None else seed
    rational = parse_form(form_spec, dim)

    if prime is not None:
        field_prime = Prime(prime)
        q = reduce_form(rational, field_prime)
        construction = construct_q_generic(q, dim, seed=seed)
        certificate = is_q_generic(PointSet.of(construction.points, dim, prime), q, threads=threads)
        data = PointSetFile(dim=dim, prime=prime, form=rational.as_rows(), mode=PointSetMode.FIELD,
                            version=settings.app_version, seed=seed,
                            points=[list(pt) for pt in construction.coordinates()],
                            certificate=certificate.summary())
        return ConstructionRun(data, certificate, rational)

    grid = construct_grid(grid_size, dim, rational, seed=seed, threads=threads)
    data = PointSetFile(dim=dim, n=grid_size, prime=grid.prime, form=rational.as_rows(),
                        mode=PointSetMode.GRID, version=settings.app_version, seed=seed,
                        points=[list(pt) for pt in grid.points],
                        certificate=grid.certificate.summary())
    return ConstructionRun(data, grid.certificate, rational, list(grid.stage_logs))


def certify_points(
    dim: int,
    points: Sequence[Sequence[int]],
    form: RationalForm,
    prime: Optional[int] = None,
    threads: Optional[int] = None
) -> Certificate:
    """Over F_p when a prime is given, otherwise over the integers."""
    if prime is not None:
        q = reduce_form(form, Prime(prime))
        return is_q_generic(PointSet(tuple(map(tuple, points)), dim, prime), q, threads=threads)
    return is_q_generic(PointSet(tuple(map(tuple, points)), dim), form, threads=threads)
