"""Exact K-NNG by exhaustive evaluation in double precision."""

from __future__ import annotations

import numpy as np
import structlog

from turbo_knng.config import get_settings
from turbo_knng.dataset.storage import Dataset
from turbo_knng.errors import ParameterError
from turbo_knng.graph.table import NeighborTable

logger = structlog.get_logger()

# Extra candidates kept from the expanded-form pass before exact re-ranking.
RERANK_SLACK = 8
# Elements of the float64 screening matrix held at once.
SCREEN_BUDGET = 2**23
# Relative slack on the cut-off so screening rounding never drops a tied candidate.
SCREEN_RTOL = 1e-9


class ExactGraph(NeighborTable):
    """Exact k nearest neighbors per node, sorted by (distance, id)."""


def brute_force_knng(dataset: Dataset, k: int, max_n: int | None = None) -> ExactGraph:
    """Exact K-NNG under squared L2.

    Distances are screened with the expanded form |a|^2 - 2ab + |b|^2 over
    row chunks, then the surviving candidates are re-ranked with exact
    float64 differences and ties broken by lower id.

    Args:
        dataset: Input points.
        k: Neighbors per node.
        max_n: Largest accepted n; ``Settings.brute_force_max_n`` if omitted.

    Returns:
        ExactGraph with float64 distances.

    Raises:
        ParameterError: If k is not in [1, n) or n exceeds the guard.
    """
    n = dataset.n
    if k < 1 or k >= n:
        raise ParameterError(f"k must satisfy 1 <= k < n, got k={k}, n={n}")
    limit = max_n if max_n is not None else get_settings().brute_force_max_n
    if n > limit:
        raise ParameterError(f"brute force is limited to n <= {limit}, got n={n}")

    points = dataset.rows.astype(np.float64)
    norms = np.einsum("ij,ij->i", points, points)
    width = min(n - 1, k + RERANK_SLACK)
    ids = np.empty((n, k), dtype=np.int32)
    dists = np.empty((n, k), dtype=np.float64)
    widened = 0

    chunk = max(1, min(1024, SCREEN_BUDGET // n))
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        block = points[start:stop]
        rows = np.arange(stop - start)
        screened = norms[start:stop, np.newaxis] - 2.0 * (block @ points.T) + norms
        screened[rows, start + rows] = np.inf
        candidates = np.argpartition(screened, width - 1, axis=1)[:, :width]

        # A row whose cut-off falls inside a block of equal distances is
        # ranked over the whole block.
        cutoff = np.take_along_axis(screened, candidates, axis=1).max(axis=1)
        cutoff += SCREEN_RTOL * (norms[start:stop] + norms.max())
        within = screened <= cutoff[:, np.newaxis]
        tied = np.flatnonzero(within.sum(axis=1) > width)

        exact = np.empty(candidates.shape, dtype=np.float64)
        for col in range(width):
            diff = block - points[candidates[:, col]]
            exact[:, col] = np.einsum("ij,ij->i", diff, diff)
        exact[candidates == (start + rows)[:, np.newaxis]] = np.inf

        order = np.lexsort((candidates, exact), axis=1)[:, :k]
        ids[start:stop] = np.take_along_axis(candidates, order, axis=1)
        dists[start:stop] = np.take_along_axis(exact, order, axis=1)

        for row in tied:
            node = start + row
            pool = np.flatnonzero(within[row])
            diff = points[pool] - points[node]
            pool_exact = np.einsum("ij,ij->i", diff, diff)
            best = np.lexsort((pool, pool_exact))[:k]
            ids[node] = pool[best]
            dists[node] = pool_exact[best]
        widened += len(tied)

    logger.debug("exact_graph_computed", n=n, k=k, widened_rows=widened)
    return ExactGraph(ids=ids, dists=dists)
