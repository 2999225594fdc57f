"""Greedy locality reordering and its evaluation metrics."""

from turbo_knng.reorder.evaluation import (
    WindowFractions,
    binomial_sigma,
    cluster_miss_bound,
    observed_miss_fraction,
    window_cluster_fraction,
)
from turbo_knng.reorder.greedy import greedy_cluster
from turbo_knng.reorder.permutation import Permutation

__all__ = [
    "Permutation",
    "WindowFractions",
    "binomial_sigma",
    "cluster_miss_bound",
    "greedy_cluster",
    "observed_miss_fraction",
    "window_cluster_fraction",
]
