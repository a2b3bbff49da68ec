"""Construction routes."""
import logging
from fastapi import APIRouter, HTTPException, Depends
from fastapi.concurrency import run_in_threadpool
from sqlalchemy.ext.asyncio import AsyncSession

from app.core.errors import GeometryError, http_status_for
from app.core.service import construct_point_set
from app.database.repository import database, ConstructionRepository
from app.models.api import ConstructionRecord, ConstructionRequest

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/constructions", tags=["constructions"])


async def get_db() -> AsyncSession:
    """Get database session."""
    async with database.get_session() as session:
        yield session


@router.post("", response_model=ConstructionRecord)
async def create_construction(
    request: ConstructionRequest,
    session: AsyncSession = Depends(get_db)
):
    """Build, certify and store a point set.

    Args:
        request: Dimension, grid size or prime, form and seed
        session: Database session

    Returns:
        The stored record
    """
    try:
        run = await run_in_threadpool(
            construct_point_set, request.dim, request.form,
            grid_size=request.n, prime=request.prime, seed=request.seed
        )
    except GeometryError as e:
        raise HTTPException(status_code=http_status_for(e), detail=str(e))

    record = ConstructionRecord(
        construction_id="",
        dim=run.data.dim,
        mode=run.data.mode,
        prime=run.data.prime,
        grid_size=run.data.n,
        form=run.data.form,
        points=run.data.points,
        certificate=run.certificate,
        stages=run.stage_logs
    )
    repo = ConstructionRepository(session)
    construction_id = await repo.create(record)
    logger.info(f"Stored construction {construction_id} ({len(record.points)} points)")

    return await repo.get(construction_id)


@router.get("/{construction_id}", response_model=ConstructionRecord)
async def get_construction(
    construction_id: str,
    session: AsyncSession = Depends(get_db)
):
    """Get a construction by ID."""
    repo = ConstructionRepository(session)
    record = await repo.get(construction_id)

    if not record:
        raise HTTPException(status_code=404, detail="Construction not found")

    return record


@router.get("", response_model=list[ConstructionRecord])
async def list_constructions(
    limit: int = 100,
    session: AsyncSession = Depends(get_db)
):
    """List stored constructions."""
    repo = ConstructionRepository(session)
    return await repo.list(limit)


@router.delete("/{construction_id}")
async def delete_construction(
    construction_id: str,
    session: AsyncSession = Depends(get_db)
):
    """Delete a construction."""
    repo = ConstructionRepository(session)
    deleted = await repo.delete(construction_id)

    if not deleted:
        raise HTTPException(status_code=404, detail="Construction not found")

    return {"message": "Construction deleted successfully"}
