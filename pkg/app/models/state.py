"""State models for pipeline runs."""
from typing import Any, Dict, Optional
from datetime import datetime
from pydantic import BaseModel


class PipelineState:
    """Mutable key/value container threaded through the pipeline stages."""

    def __init__(self, data: Optional[Dict[str, Any]] = None):
        """Initialize state.

        Args:
            data: Initial state data
        """
        self.data = data or {}

    def get(self, key: str, default: Any = None) -> Any:
        return self.data.get(key, default)

    def update(self, updates: Dict[str, Any]) -> None:
        self.data.update(updates)

    def __contains__(self, key: str) -> bool:
        return key in self.data

    def __getitem__(self, key: str) -> Any:
        return self.data[key]

    def __setitem__(self, key: str, value: Any) -> None:
        self.data[key] = value


class StageLog(BaseModel):
    """Provenance entry for one pipeline stage."""

    stage: str
    timestamp: datetime
    status: str = "pending"
    duration_ms: float = 0.0
    error: Optional[str] = None
    summary: Dict[str, Any] = {}
