"""Form classification routes."""
from fastapi import APIRouter, HTTPException
from fastapi.concurrency import run_in_threadpool

from app.core.errors import GeometryError, http_status_for
from app.geometry.field import Prime
from app.geometry.lift import reduce_form
from app.geometry.quadform import IrreducibleRank2, classify, evaluate, parse_form
from app.models.api import ClassifyRequest, ClassifyResponse, FormClassKind

router = APIRouter(prefix="/forms", tags=["forms"])


def _classify(request: ClassifyRequest) -> ClassifyResponse:
    q = reduce_form(parse_form(request.form, request.dim), Prime(request.prime))
    result = classify(q)
    if isinstance(result, IrreducibleRank2):
        return ClassifyResponse(
            form=str(q),
            prime=q.prime,
            kind=FormClassKind.IRREDUCIBLE_RANK2,
            discriminant=result.discriminant,
            euler_witness=result.euler_witness
        )
    vectors = [list(v) for v in result.basis.vectors]
    return ClassifyResponse(
        form=str(q),
        prime=q.prime,
        kind=FormClassKind.RICH,
        basis=vectors,
        values=[evaluate(q, v) for v in vectors]
    )


@router.post("/classify", response_model=ClassifyResponse)
async def classify_form(request: ClassifyRequest):
    """Classify a form over F_p as rich or irreducible of rank 2.

    Args:
        request: Form spec, dimension and prime

    Returns:
        Classification with a rich basis or the discriminant witness
    """
    try:
        return await run_in_threadpool(_classify, request)
    except GeometryError as e:
        raise HTTPException(status_code=http_status_for(e), detail=str(e))
