"""Tests for the stage pipeline."""
import pytest

from app.core.pipeline import Pipeline, Stage
from app.models.state import PipelineState


def add_one(state: PipelineState, **kwargs):
    """Test stage that adds 1 to counter."""
    return {"counter": state.get("counter", 0) + 1}


def multiply(state: PipelineState, factor: int = 2):
    """Test stage that scales counter."""
    return {"counter": state["counter"] * factor}


def explode(state: PipelineState):
    raise RuntimeError("stage failed on purpose")


def test_stages_run_in_order():
    pipeline = Pipeline([
        Stage("add", add_one),
        Stage("multiply", multiply, {"factor": 3}),
    ])
    state, logs = pipeline.run(PipelineState({"counter": 5}))

    assert state.get("counter") == 18
    assert [log.stage for log in logs] == ["add", "multiply"]
    assert all(log.status == "success" for log in logs)
    assert state["stage_logs"] is logs


def test_summaries_are_recorded():
    pipeline = Pipeline([Stage("add", add_one, summarize=lambda u: {"counter": u["counter"]})])
    _, logs = pipeline.run()
    assert logs[0].summary == {"counter": 1}
    assert logs[0].duration_ms >= 0


def test_stage_returning_none_leaves_state_alone():
    pipeline = Pipeline([Stage("noop", lambda state: None)])
    state, logs = pipeline.run(PipelineState({"counter": 2}))
    assert state["counter"] == 2
    assert logs[0].status == "success"


def test_failure_is_logged_and_reraised(caplog):
    pipeline = Pipeline([Stage("add", add_one), Stage("boom", explode), Stage("never", add_one)])
    with pytest.raises(RuntimeError, match="on purpose"):
        pipeline.run(PipelineState({"counter": 0}))
    assert "Stage boom failed" in caplog.text


def test_duplicate_stage_names_rejected():
    with pytest.raises(ValueError):
        Pipeline([Stage("add", add_one), Stage("add", add_one)])


def test_state_container():
    state = PipelineState()
    state["n"] = 100
    state.update({"d": 2})
    assert "n" in state
    assert "prime" not in state
    assert state.get("prime", 97) == 97
    assert state["d"] == 2
