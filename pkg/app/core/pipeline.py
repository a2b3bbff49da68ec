"""Linear stage pipeline with per-stage provenance logs."""
import logging
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Optional

from app.models.state import PipelineState, StageLog

logger = logging.getLogger(__name__)

StageFunc = Callable[..., Optional[Dict[str, Any]]]


class Stage:
    """A single named step of a pipeline."""

    def __init__(
        self,
        name: str,
        func: StageFunc,
        config: Optional[Dict[str, Any]] = None,
        summarize: Optional[Callable[[Dict[str, Any]], Dict[str, Any]]] = None
    ):
        """Initialize stage.

        Args:
            name: Stage name used in logs
            func: Callable taking the state and config keyword arguments,
                returning a dict of state updates (or None)
            config: Extra keyword arguments for func
            summarize: Builds the StageLog summary from the updates
        """
        self.name = name
        self.func = func
        self.config = config or {}
        self.summarize = summarize

    def run(self, state: PipelineState) -> Dict[str, Any]:
        """Execute the stage and merge its updates into state.

        Returns:
            The updates produced by the stage
        """
        result = self.func(state, **self.config)
        updates = result if isinstance(result, dict) else {}
        state.update(updates)
        return updates

    def __repr__(self) -> str:
        return f"Stage(name={self.name}, func={getattr(self.func, '__name__', self.func)})"


class Pipeline:
    """Runs stages in order; a failing stage stops the run and re-raises."""

    def __init__(self, stages: List[Stage]):
        names = [stage.name for stage in stages]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate stage names: {names}")
        self.stages = stages

    def run(self, state: Optional[PipelineState] = None) -> tuple[PipelineState, List[StageLog]]:
        """Execute all stages.

        Args:
            state: Initial state

        Returns:
            Tuple of (final state, stage logs)
        """
        state = state or PipelineState()
        logs: List[StageLog] = []

        for stage in self.stages:
            start_time = datetime.now(tz=timezone.utc)
            log_entry = StageLog(stage=stage.name, timestamp=start_time)
            try:
                logger.info(f"Running stage: {stage.name}")
                updates = stage.run(state)
                log_entry.status = "success"
                if stage.summarize is not None:
                    log_entry.summary = stage.summarize(updates)
            except Exception as e:
                logger.error(f"Stage {stage.name} failed: {e}")
                log_entry.status = "error"
                log_entry.error = str(e)
                raise
            finally:
                end_time = datetime.now(tz=timezone.utc)
                log_entry.duration_ms = (end_time - start_time).total_seconds() * 1000
                logs.append(log_entry)
                logger.debug(f"Stage {stage.name} took {log_entry.duration_ms:.1f} ms")

        state["stage_logs"] = logs
        return state, logs
