"""Request and response models of the HTTP API."""
from typing import List, Optional
from datetime import datetime
from pydantic import BaseModel, Field, model_validator
from enum import Enum

from app.models.certificate import Certificate
from app.models.pointset import PointSetMode
from app.models.state import StageLog


class FormClassKind(str, Enum):
    RICH = "rich"
    IRREDUCIBLE_RANK2 = "irreducible_rank2"


class ClassifyRequest(BaseModel):
    """Request to classify a form over F_p."""

    form: str = "sphere"
    dim: int = Field(ge=2)
    prime: int


class ClassifyResponse(BaseModel):
    form: str
    prime: int
    kind: FormClassKind
    basis: Optional[List[List[int]]] = None
    values: Optional[List[int]] = None
    discriminant: Optional[int] = None
    euler_witness: Optional[int] = None


class ConstructionRequest(BaseModel):
    """Request to build and certify a point set (grid size n or prime p)."""

    dim: int = Field(ge=2)
    n: Optional[int] = Field(default=None, ge=3)
    prime: Optional[int] = None
    form: str = "sphere"
    seed: int = 0

    @model_validator(mode="after")
    def check_mode(self) -> "ConstructionRequest":
        if (self.n is None) == (self.prime is None):
            raise ValueError("give exactly one of n (grid) or prime (field)")
        return self


class ConstructionRecord(BaseModel):
    """A persisted, certified construction."""

    construction_id: str
    dim: int
    mode: PointSetMode
    prime: int
    grid_size: Optional[int] = None
    form: List[List[int]]
    points: List[List[int]]
    certificate: Certificate
    stages: List[StageLog] = Field(default_factory=list)
    created_at: Optional[datetime] = None


class CertificateRequest(BaseModel):
    """Points to certify; over F_p when prime is set, else over the integers."""

    dim: int = Field(ge=1)
    form: str = "sphere"
    prime: Optional[int] = None
    points: List[List[int]]
