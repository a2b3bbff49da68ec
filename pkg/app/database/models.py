"""Database models."""
from sqlalchemy import Column, String, JSON, DateTime, Integer
from sqlalchemy.orm import declarative_base
from sqlalchemy.sql import func

Base = declarative_base()


class ConstructionModel(Base):
    """Database model for certified constructions."""

    __tablename__ = "constructions"

    id = Column(String, primary_key=True, index=True)
    dim = Column(Integer, nullable=False)
    mode = Column(String, nullable=False)
    prime = Column(Integer, nullable=False)
    grid_size = Column(Integer, nullable=True)
    form = Column(JSON, nullable=False)
    points = Column(JSON, nullable=False)
    certificate = Column(JSON, nullable=False)
    stages = Column(JSON, nullable=False, default=[])
    status = Column(String, nullable=False, index=True)
    created_at = Column(DateTime(timezone=True), server_default=func.now())
