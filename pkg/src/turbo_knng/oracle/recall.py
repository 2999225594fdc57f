"""Recall of an approximate graph against the exact one."""

import numpy as np

from turbo_knng.errors import ParameterError
from turbo_knng.graph.knn_graph import KnnGraph
from turbo_knng.graph.table import NeighborTable

CHUNK_ROWS = 4096


def recall(approx: KnnGraph | NeighborTable, exact: NeighborTable) -> float:
    """Fraction of exact (node, neighbor) pairs present in the approximation.

    Membership is by id only; distances and row order are ignored.

    Args:
        approx: Graph or table under evaluation.
        exact: Exact neighbor table.

    Returns:
        Value in [0, 1].

    Raises:
        ParameterError: If n or k differ.
    """
    if approx.ids.shape != exact.ids.shape:
        raise ParameterError(
            f"graph shapes differ: approx {approx.ids.shape} vs exact {exact.ids.shape}"
        )

    hits = 0
    for start in range(0, exact.n, CHUNK_ROWS):
        a = approx.ids[start : start + CHUNK_ROWS]
        e = exact.ids[start : start + CHUNK_ROWS]
        hits += int((e[:, :, np.newaxis] == a[:, np.newaxis, :]).any(axis=2).sum())
    return hits / exact.ids.size
