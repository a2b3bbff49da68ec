"""Tests for construction persistence."""
import pytest
import pytest_asyncio

from app.database.repository import ConstructionRepository, Database
from app.geometry.curve import construct_q_generic
from app.geometry.quadform import QuadraticForm
from app.geometry.verify import PointSet, is_q_generic
from app.models.api import ConstructionRecord
from app.models.pointset import PointSetMode


def circle_record() -> ConstructionRecord:
    q = QuadraticForm(2, {(1, 1): 1, (2, 2): 1}, 13)
    c = construct_q_generic(q)
    certificate = is_q_generic(PointSet.of(c.points, 2, 13), q)
    return ConstructionRecord(
        construction_id="",
        dim=2,
        mode=PointSetMode.FIELD,
        prime=13,
        form=[[1, 1, 1, 1], [2, 2, 1, 1]],
        points=[list(pt) for pt in c.coordinates()],
        certificate=certificate,
    )


@pytest_asyncio.fixture
async def session():
    db = Database("sqlite+aiosqlite:///:memory:")
    await db.create_tables()
    async with db.get_session() as s:
        yield s
    await db.drop_tables()
    await db.engine.dispose()


@pytest.mark.asyncio
async def test_create_and_get(session):
    repo = ConstructionRepository(session)
    record = circle_record()
    construction_id = await repo.create(record)

    stored = await repo.get(construction_id)
    assert stored.construction_id == construction_id
    assert stored.points == record.points
    assert stored.certificate == record.certificate
    assert stored.mode == PointSetMode.FIELD
    assert stored.created_at is not None


@pytest.mark.asyncio
async def test_list_and_delete(session):
    repo = ConstructionRepository(session)
    first = await repo.create(circle_record())
    second = await repo.create(circle_record())
    assert {r.construction_id for r in await repo.list()} == {first, second}
    assert len(await repo.list(limit=1)) == 1

    assert await repo.delete(first)
    assert not await repo.delete(first)
    assert await repo.get(first) is None
    assert [r.construction_id for r in await repo.list()] == [second]


@pytest.mark.asyncio
async def test_get_unknown_id(session):
    assert await ConstructionRepository(session).get("missing") is None


@pytest.mark.asyncio
async def test_drop_tables_clears_stored_runs():
    db = Database("sqlite+aiosqlite:///:memory:")
    await db.create_tables()
    async with db.get_session() as s:
        await ConstructionRepository(s).create(circle_record())
        assert len(await ConstructionRepository(s).list()) == 1

    await db.drop_tables()
    await db.create_tables()
    async with db.get_session() as s:
        assert await ConstructionRepository(s).list() == []
    await db.engine.dispose()
