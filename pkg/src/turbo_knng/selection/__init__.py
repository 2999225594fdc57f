"""Per-iteration candidate selection."""

from turbo_knng.selection.candidates import CandidateSet
from turbo_knng.selection.strategies import (
    STRATEGIES,
    SelectionStrategy,
    select,
    select_fused,
    select_naive,
    select_turbo,
)

__all__ = [
    "STRATEGIES",
    "CandidateSet",
    "SelectionStrategy",
    "select",
    "select_fused",
    "select_naive",
    "select_turbo",
]
