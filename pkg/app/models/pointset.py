"""Point-set file models."""
from typing import Any, Dict, List, Optional
from pydantic import BaseModel, Field, model_validator
from enum import Enum


class PointSetMode(str, Enum):
    """Coordinate convention of a point-set file."""
    GRID = "grid"       # integers in {1, ..., p}
    FIELD = "field"     # residues in {0, ..., p - 1}
    POINTS = "points"   # arbitrary integers


class PointSetFile(BaseModel):
    """Header plus one row of d integer coordinates per point."""

    dim: int = Field(ge=1)
    n: Optional[int] = None
    prime: Optional[int] = None
    form: List[List[int]] = Field(default_factory=list)
    mode: PointSetMode = PointSetMode.POINTS
    version: str = ""
    seed: int = 0
    points: List[List[int]] = Field(default_factory=list)
    certificate: Optional[Dict[str, Any]] = None

    @model_validator(mode="after")
    def check_rows(self) -> "PointSetFile":
        for row in self.form:
            if len(row) != 4 or row[3] == 0:
                raise ValueError(f"form rows are [i, j, numerator, denominator], got {row}")
        if self.mode != PointSetMode.POINTS and self.prime is None:
            raise ValueError(f"{self.mode.value} files must declare a prime")
        for index, point in enumerate(self.points):
            if len(point) != self.dim:
                raise ValueError(f"row {index} has {len(point)} coordinates, expected {self.dim}")
            if self.mode == PointSetMode.GRID and not all(1 <= x <= self.prime for x in point):
                raise ValueError(f"row {index} leaves the grid {{1..{self.prime}}}^{self.dim}")
            if self.mode == PointSetMode.FIELD and not all(0 <= x < self.prime for x in point):
                raise ValueError(f"row {index} is not reduced mod {self.prime}")
        return self

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def field_mode(self) -> bool:
        return self.mode == PointSetMode.FIELD
