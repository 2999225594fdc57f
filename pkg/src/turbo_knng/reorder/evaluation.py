"""Evaluation of a reordering against ground-truth cluster labels."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from turbo_knng.dataset.storage import ClusterLabels
from turbo_knng.errors import ParameterError
from turbo_knng.graph.knn_graph import KnnGraph
from turbo_knng.reorder.permutation import Permutation

WINDOW_COLUMNS = ["window_start", "cluster_id", "fraction"]


@dataclass(frozen=True, eq=False)
class WindowFractions:
    """Cluster composition of sliding windows over the permuted order.

    Attributes:
        starts: First position of each window.
        fractions: Array (len(starts), c); row p gives the share of each
            cluster among the window's occupants.
        window: Window length.
    """

    starts: NDArray[np.int64]
    fractions: NDArray[np.float64]
    window: int

    def max_fraction(self) -> NDArray[np.float64]:
        """Share of the dominant cluster in each window."""
        return self.fractions.max(axis=1)

    def to_frame(self) -> pd.DataFrame:
        n_windows, c = self.fractions.shape
        return pd.DataFrame(
            {
                "window_start": np.repeat(self.starts, c),
                "cluster_id": np.tile(np.arange(c), n_windows),
                "fraction": self.fractions.ravel(),
            }
        )

    def to_csv(self, path: str | Path) -> None:
        self.to_frame().to_csv(path, index=False)


def window_cluster_fraction(
    labels: ClusterLabels, perm: Permutation, window: int = 2000
) -> WindowFractions:
    """Per-cluster fraction of each window of positions after permuting.

    Windows start every window/4 positions; the last window ending at n is
    always included.

    Args:
        labels: Cluster label per original node.
        perm: Permutation node -> position.
        window: Window length.

    Returns:
        WindowFractions whose rows each sum to 1.

    Raises:
        ParameterError: If sizes differ or n < window.
    """
    n = labels.n
    if perm.n != n:
        raise ParameterError(f"permutation size {perm.n} does not match label count {n}")
    if window < 1 or n < window:
        raise ParameterError(f"window must be between 1 and n={n}, got {window}")

    stride = max(1, window // 4)
    starts = np.arange(0, n - window + 1, stride, dtype=np.int64)
    if starts[-1] != n - window:
        starts = np.append(starts, n - window)

    by_position = labels.labels[perm.sigma_inv]
    onehot = np.zeros((n + 1, labels.c), dtype=np.int64)
    onehot[np.arange(1, n + 1), by_position] = 1
    cumulative = np.cumsum(onehot, axis=0)
    counts = cumulative[starts + window] - cumulative[starts]
    return WindowFractions(starts=starts, fractions=counts / window, window=window)


def cluster_miss_bound(c: int, k: int) -> float:
    """Upper bound ((c-1)/c)^k on missing a node's own cluster among k random neighbors.

    Raises:
        ParameterError: If c < 2 or k < 1.
    """
    if c < 2:
        raise ParameterError(f"miss bound needs c >= 2, got c={c}")
    if k < 1:
        raise ParameterError(f"miss bound needs k >= 1, got k={k}")
    return ((c - 1) / c) ** k


def observed_miss_fraction(graph: KnnGraph, labels: ClusterLabels) -> float:
    """Fraction of nodes none of whose neighbors share their cluster."""
    if labels.n != graph.n:
        raise ParameterError(f"label count {labels.n} does not match graph size {graph.n}")
    same = labels.labels[graph.ids] == labels.labels[:, np.newaxis]
    return float(np.mean(~same.any(axis=1)))


def binomial_sigma(p: float, trials: int) -> float:
    """Standard deviation of an observed proportion over ``trials`` draws."""
    if trials < 1:
        raise ParameterError(f"trials must be positive, got {trials}")
    return math.sqrt(p * (1.0 - p) / trials)
