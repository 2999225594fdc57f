"""NN-Descent driver, parameters and metrics."""

from turbo_knng.descent.driver import RunOutcome, compute_step, run
from turbo_knng.descent.metrics import METRIC_COLUMNS, IterationMetrics, RunMetrics
from turbo_knng.descent.params import DistanceKernel, RunParams

__all__ = [
    "METRIC_COLUMNS",
    "DistanceKernel",
    "IterationMetrics",
    "RunMetrics",
    "RunOutcome",
    "RunParams",
    "compute_step",
    "run",
]
