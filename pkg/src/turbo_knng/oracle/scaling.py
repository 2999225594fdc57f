"""Empirical scaling of distance evaluations with n."""

from collections.abc import Sequence

import numpy as np

from turbo_knng.errors import ParameterError


def scaling_exponent(sizes: Sequence[int], dist_eval_counts: Sequence[int]) -> float:
    """Least-squares slope of log(dist_evals) against log(n).

    Args:
        sizes: Strictly increasing dataset sizes.
        dist_eval_counts: Total distance evaluations per size.

    Returns:
        Fitted exponent.

    Raises:
        ParameterError: With fewer than three points, mismatched lengths,
            non-increasing sizes or non-positive values.
    """
    x = np.asarray(sizes, dtype=np.float64)
    y = np.asarray(dist_eval_counts, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ParameterError("sizes and counts must be 1-D sequences of equal length")
    if x.size < 3:
        raise ParameterError(f"scaling fit needs at least 3 points, got {x.size}")
    if np.any(np.diff(x) <= 0):
        raise ParameterError("sizes must be strictly increasing")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ParameterError("sizes and counts must be positive")

    slope, _ = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)
