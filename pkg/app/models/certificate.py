"""Certificate models."""
from typing import List, Optional
from pydantic import BaseModel
from enum import Enum


class CertificateStatus(str, Enum):
    """Verdict of an exhaustive Q-genericity check."""
    PASS = "pass"
    HYPERPLANE_VIOLATION = "hyperplane_violation"
    QUADRIC_VIOLATION = "quadric_violation"


class ViolationKind(str, Enum):
    HYPERPLANE = "hyperplane"
    QUADRIC = "quadric"


class Violation(BaseModel):
    """First violating subset in lexicographic order, with its witness.

    The witness lists the coefficients (a_0, a_1, ..., a_d[, b]) of the
    equation a_0 + sum a_i x_i [+ b Q(x)] = 0 satisfied by every point of
    the subset.
    """

    kind: ViolationKind
    subset: List[int]
    witness: List[int]
    determinant: int = 0


class Certificate(BaseModel):
    """Exact proof object for the two Q-generic conditions."""

    status: CertificateStatus
    dim: int
    num_points: int
    prime: Optional[int] = None
    hyperplane_subsets: int = 0
    quadric_subsets: int = 0
    max_hyperplane_incidence: Optional[int] = None
    max_quadric_incidence: Optional[int] = None
    incidence_exact: bool = True
    violation: Optional[Violation] = None

    @property
    def passed(self) -> bool:
        return self.status == CertificateStatus.PASS

    @property
    def subsets_tested(self) -> int:
        return self.hyperplane_subsets + self.quadric_subsets

    @property
    def arithmetic(self) -> str:
        return "integer" if self.prime is None else f"F_{self.prime}"

    def summary(self) -> dict:
        """The fields written into point-set files."""
        return {
            "status": self.status.value,
            "max_hyperplane_incidence": self.max_hyperplane_incidence,
            "max_quadric_incidence": self.max_quadric_incidence,
        }

