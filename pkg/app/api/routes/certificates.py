"""Certification routes."""
from fastapi import APIRouter, HTTPException
from fastapi.concurrency import run_in_threadpool

from app.core.errors import GeometryError, http_status_for
from app.core.service import certify_points
from app.geometry.quadform import parse_form
from app.models.api import CertificateRequest
from app.models.certificate import Certificate

router = APIRouter(prefix="/certificates", tags=["certificates"])


def _certify(request: CertificateRequest) -> Certificate:
    form = parse_form(request.form, request.dim)
    return certify_points(request.dim, request.points, form, request.prime)


@router.post("", response_model=Certificate)
async def certify(request: CertificateRequest):
    """Certify a point set exhaustively.

    Args:
        request: Points, form and optional prime

    Returns:
        Certificate (a violation is a normal result, not an error)
    """
    try:
        return await run_in_threadpool(_certify, request)
    except (GeometryError, ValueError) as e:
        raise HTTPException(status_code=http_status_for(e), detail=str(e))
