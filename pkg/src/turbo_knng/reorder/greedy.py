"""Greedy clustering heuristic.

A single pass over positions 0..n-1. For the node currently at position
i, its neighbors are scanned nearest first: neighbors already placed at
or before i are skipped; if one already sits at i+1 the position is
settled; otherwise the first unplaced neighbor is swapped into position
i+1. Chains of near neighbors end up adjacent in memory.

When every neighbor of the node at i is already placed, the plain pass
leaves whatever node happens to occupy i+1, which is usually in another
cluster. With ``backtrack`` on, the unplaced neighbors seen in rows read
so far are kept on a stack and the most recent one still unplaced fills
i+1 instead. Rows are still read once each.
"""

import numba
import numpy as np
import structlog
from numpy.typing import NDArray

from turbo_knng.errors import GraphInvariantError
from turbo_knng.graph.knn_graph import KnnGraph
from turbo_knng.graph.table import sort_rows
from turbo_knng.reorder.permutation import Permutation

logger = structlog.get_logger()


@numba.njit(cache=True, boundscheck=False)
def _greedy_pass(
    adjacency: NDArray[np.int32],
    sigma: NDArray[np.int64],
    sigma_inv: NDArray[np.int64],
    reads: NDArray[np.int64],
    check: bool,
    backtrack: bool,
) -> int:
    """Fill positions 1..n-1 in place; return the position of a failed check or -1."""
    n, k = adjacency.shape
    frontier = np.empty(n * k if backtrack else 1, dtype=np.int32)
    top = 0
    for i in range(n):
        node = sigma_inv[i]
        reads[node] += 1
        if i + 1 >= n:
            break
        target = -1
        settled = k
        for j in range(k):
            x = adjacency[node, j]
            if x < 0 or sigma[x] < i + 1:
                continue
            target = x
            settled = j
            break
        if backtrack:
            # farthest first, so the nearest unplaced neighbor ends on top
            for j in range(k - 1, settled, -1):
                x = adjacency[node, j]
                if x >= 0 and sigma[x] > i + 1:
                    frontier[top] = x
                    top += 1
            while target < 0 and top > 0:
                top -= 1
                if sigma[frontier[top]] >= i + 1:
                    target = frontier[top]
        if target < 0:
            continue
        pos_x = sigma[target]
        if pos_x == i + 1:
            continue
        y = sigma_inv[i + 1]
        sigma[target] = i + 1
        sigma[y] = pos_x
        sigma_inv[i + 1] = target
        sigma_inv[pos_x] = y
        if check and (sigma_inv[sigma[target]] != target or sigma_inv[sigma[y]] != y):
            return i
    return -1


def greedy_cluster(
    graph: KnnGraph,
    debug: bool = False,
    reads: NDArray[np.int64] | None = None,
    backtrack: bool = True,
) -> Permutation:
    """Derive a locality-improving permutation from the current graph.

    Args:
        graph: K-NNG approximation; only ids and stored distances are used.
        debug: Verify the swapped entries of sigma and sigma_inv after
            every swap.
        reads: Optional int64 array of length n counting adjacency reads
            per node.
        backtrack: Fill dead ends from the stack of unplaced neighbors
            seen so far instead of keeping the current occupant.

    Returns:
        Permutation mapping node -> new position.

    Raises:
        GraphInvariantError: In debug mode, if a swap breaks bijectivity.
    """
    n = graph.n
    adjacency, _ = sort_rows(graph.ids, graph.dists)
    sigma = np.arange(n, dtype=np.int64)
    sigma_inv = np.arange(n, dtype=np.int64)
    if reads is None:
        reads = np.zeros(n, dtype=np.int64)

    failed_at = _greedy_pass(adjacency, sigma, sigma_inv, reads, debug, backtrack)
    if failed_at >= 0:
        raise GraphInvariantError(f"permutation lost bijectivity at position {failed_at}")

    perm = Permutation(sigma=sigma, sigma_inv=sigma_inv)
    logger.debug(
        "greedy_cluster_completed",
        n=n,
        backtrack=backtrack,
        moved=int(np.count_nonzero(sigma != np.arange(n))),
    )
    return perm
