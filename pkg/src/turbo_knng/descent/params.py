"""Validated parameters for one descent run."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator

from turbo_knng.config import Settings, get_settings
from turbo_knng.selection.strategies import SelectionStrategy

DistanceKernel = Literal["scalar", "blocked"]


class RunParams(BaseModel):
    """Everything that determines a descent run besides the dataset.

    Attributes:
        k: Neighbors per node.
        max_candidates: Cap on each node's sampled candidates per iteration.
        termination_delta: Stop once an iteration changes fewer than
            termination_delta * n * k entries.
        max_iterations: Hard cap on iterations; 0 returns the random graph.
        selection_strategy: Candidate sampling strategy.
        reorder_enabled: Whether to run the greedy reordering mid-run.
        reorder_after_iteration: Iteration after which the reordering runs.
        seed: Root seed; every stochastic step derives its seed from it.
        kernel: Distance kernel for the local join.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    k: int = Field(default=20, ge=2)
    max_candidates: int = Field(default=50, ge=2)
    termination_delta: float = Field(default=0.001, gt=0.0, lt=1.0)
    max_iterations: int = Field(default=30, ge=0)
    selection_strategy: SelectionStrategy = "turbo"
    reorder_enabled: bool = False
    reorder_after_iteration: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0)
    kernel: DistanceKernel = "blocked"

    @field_validator("max_candidates")
    @classmethod
    def validate_max_candidates(cls, v: int, info: ValidationInfo) -> int:
        """Validate that the candidate cap is at least k.

        Args:
            v: Candidate cap value.
            info: Field validation info containing other field values.

        Returns:
            Validated candidate cap.

        Raises:
            ValueError: If the cap is smaller than k.
        """
        k = info.data.get("k")
        if k is not None and v < k:
            raise ValueError(f"max_candidates ({v}) must be at least k ({k})")
        return v

    @classmethod
    def from_settings(cls, settings: Settings | None = None, **overrides: Any) -> RunParams:
        """Defaults from settings, with explicit values taking precedence.

        Args:
            settings: Settings to read; the global instance if omitted.
            **overrides: Field values; ``None`` entries are ignored.

        Returns:
            Validated parameters.
        """
        settings = settings or get_settings()
        values: dict[str, Any] = {
            "k": settings.default_k,
            "max_candidates": settings.max_candidates,
            "termination_delta": settings.termination_delta,
            "max_iterations": settings.max_iterations,
            "reorder_after_iteration": settings.reorder_after_iteration,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)
