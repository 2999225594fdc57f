"""Per-iteration run metrics and their CSV form."""

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import pandas as pd

METRIC_COLUMNS = [
    "iteration",
    "wall_time_s",
    "dist_evals",
    "changes",
    "selection_s",
    "compute_s",
    "reorder_s",
    "flops",
]
SUMMED_COLUMNS = METRIC_COLUMNS[1:]
TOTAL_LABEL = "total"


@dataclass
class IterationMetrics:
    """Counters for one iteration; iteration 0 is the random initialization.

    Attributes:
        iteration: Iteration number.
        wall_time_s: Wall time of the whole iteration.
        dist_evals: Distance evaluations performed in this iteration.
        changes: Successful graph inserts in this iteration.
        selection_s: Time spent selecting candidates.
        compute_s: Time spent in the local join.
        reorder_s: Time spent reordering (zero unless it ran here).
        flops: dist_evals * (3d - 1).
    """

    iteration: int
    wall_time_s: float
    dist_evals: int
    changes: int
    selection_s: float = 0.0
    compute_s: float = 0.0
    reorder_s: float = 0.0
    flops: int = 0

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class RunMetrics:
    """All iteration rows of a run plus summary slots.

    Attributes:
        n: Dataset size.
        d: Dimensionality.
        iterations: Rows in execution order, starting with iteration 0.
        converged: True if the run stopped on the change threshold.
        recall: Recall against the exact graph, when measured.
    """

    n: int
    d: int
    iterations: list[IterationMetrics] = field(default_factory=list)
    converged: bool = False
    recall: float | None = None

    def record(self, row: IterationMetrics) -> None:
        self.iterations.append(row)

    @property
    def iterations_run(self) -> int:
        """Descent iterations performed, not counting initialization."""
        return sum(1 for row in self.iterations if row.iteration > 0)

    @property
    def total_dist_evals(self) -> int:
        return sum(row.dist_evals for row in self.iterations)

    @property
    def total_changes(self) -> int:
        return sum(row.changes for row in self.iterations)

    @property
    def total_wall_time_s(self) -> float:
        return sum(row.wall_time_s for row in self.iterations)

    @property
    def total_flops(self) -> int:
        return sum(row.flops for row in self.iterations)

    def to_frame(self, include_totals: bool = True) -> pd.DataFrame:
        """Iteration rows, optionally followed by a totals row.

        Args:
            include_totals: Append a row labelled ``total`` holding column sums.

        Returns:
            DataFrame with ``METRIC_COLUMNS``.
        """
        frame = pd.DataFrame([row.to_dict() for row in self.iterations], columns=METRIC_COLUMNS)
        if include_totals:
            totals = frame[SUMMED_COLUMNS].sum().to_dict()
            totals["iteration"] = TOTAL_LABEL
            frame = pd.concat([frame, pd.DataFrame([totals])], ignore_index=True)
        return frame

    def to_csv(self, path: str | Path) -> None:
        self.to_frame().to_csv(path, index=False)

    def summary_line(self) -> str:
        """One-line run summary printed by ``build``."""
        line = (
            f"n={self.n} d={self.d} iters={self.iterations_run} "
            f"dist_evals={self.total_dist_evals} total_s={self.total_wall_time_s:.3f}"
        )
        if self.recall is not None:
            line += f" recall={self.recall:.4f}"
        return line

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "d": self.d,
            "iterations": [row.to_dict() for row in self.iterations],
            "converged": self.converged,
            "recall": self.recall,
            "total_dist_evals": self.total_dist_evals,
            "total_changes": self.total_changes,
            "total_wall_time_s": self.total_wall_time_s,
        }
