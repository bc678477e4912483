"""
Pipeline Module for encprim

A pipeline is an ordered list of named steps sharing one context object.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Generic, TypeVar

from ..errors import EncprimError, PipelineStageError


logger = logging.getLogger(__name__)

ContextT = TypeVar("ContextT")


class PipelineStatus(str, Enum):
    """Status of a pipeline execution."""

    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class PipelineStep(Generic[ContextT]):
    """A single named step in a pipeline."""

    name: str
    run: Callable[[ContextT], None]
    condition: Callable[[ContextT], bool] | None = None

    def should_execute(self, context: ContextT) -> bool:
        """Check if this step should execute based on condition."""
        if self.condition is None:
            return True
        return self.condition(context)


@dataclass
class PipelineResult:
    """Result of a pipeline execution."""

    status: PipelineStatus
    completed_steps: list[str] = field(default_factory=list)
    skipped_steps: list[str] = field(default_factory=list)
    current_step: str | None = None
    error: PipelineStageError | None = None

    @property
    def succeeded(self) -> bool:
        return self.status == PipelineStatus.COMPLETED


class Pipeline(Generic[ContextT]):
    """
    Sequential stage runner.

    Any failure inside a step stops the pipeline; it is reported as a
    PipelineStageError naming the step (and the encounter, when known).
    """

    def __init__(self, name: str, description: str = ""):
        self.name = name
        self.description = description
        self.steps: list[PipelineStep[ContextT]] = []

    def add_step(
        self,
        name: str,
        run: Callable[[ContextT], None],
        condition: Callable[[ContextT], bool] | None = None,
    ) -> Pipeline[ContextT]:
        """Add a step to the pipeline. Returns self for chaining."""
        self.steps.append(PipelineStep(name=name, run=run, condition=condition))
        return self

    @property
    def step_names(self) -> list[str]:
        return [step.name for step in self.steps]

    def execute(self, context: ContextT) -> PipelineResult:
        result = PipelineResult(status=PipelineStatus.RUNNING)

        for step in self.steps:
            result.current_step = step.name

            if not step.should_execute(context):
                logger.info("Skipping stage %s", step.name)
                result.skipped_steps.append(step.name)
                continue

            logger.info("Stage %s", step.name)
            try:
                step.run(context)
            except PipelineStageError as e:
                result.status = PipelineStatus.FAILED
                result.error = e
                return result
            except EncprimError as e:
                result.status = PipelineStatus.FAILED
                result.error = PipelineStageError(step.name, str(e))
                return result
            except Exception as e:
                logger.exception("Unexpected failure in stage %s", step.name)
                result.status = PipelineStatus.FAILED
                result.error = PipelineStageError(step.name, f"{type(e).__name__}: {e}")
                return result

            result.completed_steps.append(step.name)

        result.status = PipelineStatus.COMPLETED
        result.current_step = None
        return result

    def describe(self) -> dict[str, Any]:
        return {"name": self.name, "description": self.description, "steps": self.step_names}
