"""Database repository for persistence."""
import uuid
import json
from typing import Optional, List
from sqlalchemy.ext.asyncio import AsyncSession, create_async_engine, async_sessionmaker
from sqlalchemy.pool import StaticPool
from sqlalchemy import select

from app.database.models import Base, ConstructionModel
from app.models.api import ConstructionRecord
from app.models.certificate import Certificate
from app.models.state import StageLog
from app.config import settings


class Database:
    """Database connection manager."""

    def __init__(self, url: Optional[str] = None):
        """Initialize database.

        Args:
            url: SQLAlchemy URL, defaults to settings.database_url
        """
        url = url or settings.database_url
        if ":memory:" in url:
            # one shared connection, or every session sees an empty database
            self.engine = create_async_engine(
                url,
                echo=settings.database_echo,
                poolclass=StaticPool,
                connect_args={"check_same_thread": False}
            )
        else:
            self.engine = create_async_engine(
                url,
                echo=settings.database_echo,
                pool_pre_ping=True
            )
        self.SessionLocal = async_sessionmaker(
            self.engine,
            class_=AsyncSession,
            expire_on_commit=False
        )

    async def create_tables(self):
        """Create database tables."""
        async with self.engine.begin() as conn:
            await conn.run_sync(Base.metadata.create_all)

    async def drop_tables(self):
        """Drop database tables."""
        async with self.engine.begin() as conn:
            await conn.run_sync(Base.metadata.drop_all)

    def get_session(self) -> AsyncSession:
        """Get database session."""
        return self.SessionLocal()


database = Database()


class ConstructionRepository:
    """Repository for construction records."""

    def __init__(self, session: AsyncSession):
        """Initialize repository.

        Args:
            session: Database session
        """
        self.session = session

    async def create(self, record: ConstructionRecord) -> str:
        """Store a construction.

        Args:
            record: Construction record; its id is generated if empty

        Returns:
            Construction ID
        """
        construction_id = record.construction_id or str(uuid.uuid4())

        db_record = ConstructionModel(
            id=construction_id,
            dim=record.dim,
            mode=record.mode.value,
            prime=record.prime,
            grid_size=record.grid_size,
            form=record.form,
            points=record.points,
            certificate=json.loads(record.certificate.model_dump_json()),
            stages=[json.loads(log.model_dump_json()) for log in record.stages],
            status=record.certificate.status.value
        )

        self.session.add(db_record)
        await self.session.commit()
        await self.session.refresh(db_record)

        return construction_id

    async def _fetch(self, construction_id: str) -> Optional[ConstructionModel]:
        result = await self.session.execute(
            select(ConstructionModel).where(ConstructionModel.id == construction_id)
        )
        return result.scalar_one_or_none()

    @staticmethod
    def _to_record(db_record: ConstructionModel) -> ConstructionRecord:
        return ConstructionRecord(
            construction_id=db_record.id,
            dim=db_record.dim,
            mode=db_record.mode,
            prime=db_record.prime,
            grid_size=db_record.grid_size,
            form=db_record.form,
            points=db_record.points,
            certificate=Certificate.model_validate(db_record.certificate),
            stages=[StageLog.model_validate(log) for log in db_record.stages or []],
            created_at=db_record.created_at
        )

    async def get(self, construction_id: str) -> Optional[ConstructionRecord]:
        """Get a construction by ID.

        Args:
            construction_id: Construction ID

        Returns:
            Construction record or None
        """
        db_record = await self._fetch(construction_id)
        if not db_record:
            return None
        return self._to_record(db_record)

    async def list(self, limit: int = 100) -> List[ConstructionRecord]:
        """List stored constructions.

        Args:
            limit: Maximum number of results

        Returns:
            List of construction records
        """
        result = await self.session.execute(
            select(ConstructionModel).order_by(ConstructionModel.created_at).limit(limit)
        )
        return [self._to_record(r) for r in result.scalars().all()]

    async def delete(self, construction_id: str) -> bool:
        """Delete a construction.

        Args:
            construction_id: Construction ID

        Returns:
            True if deleted
        """
        db_record = await self._fetch(construction_id)

        if db_record:
            await self.session.delete(db_record)
            await self.session.commit()
            return True

        return False
