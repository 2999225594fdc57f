"""Jitted bounded max-heaps backing each K-NNG row.

A row is three parallel arrays (ids, dists, flags) of length k with the
largest distance at index 0. Empty slots hold id -1 and distance +inf.
"""

import numba
import numpy as np
from numpy.typing import NDArray

from turbo_knng.distance.kernels import l2_sq_rows
from turbo_knng.rng import tau_rand_int

FLAG_OLD = 0
FLAG_NEW = 1


@numba.njit(cache=True, boundscheck=False)
def sift_down(
    ids: NDArray[np.int32],
    dists: NDArray[np.float32],
    flags: NDArray[np.uint8],
    dist: float,
    node: int,
    flag: int,
) -> None:
    """Replace the root with (node, dist, flag) and restore heap order."""
    size = dists.shape[0]
    i = 0
    while True:
        left = 2 * i + 1
        right = left + 1
        if left >= size:
            break
        if right >= size or dists[left] >= dists[right]:
            swap = left
        else:
            swap = right
        if dists[swap] <= dist:
            break
        ids[i] = ids[swap]
        dists[i] = dists[swap]
        flags[i] = flags[swap]
        i = swap

    ids[i] = node
    dists[i] = dist
    flags[i] = flag


@numba.njit(cache=True, boundscheck=False)
def heap_try_insert(
    ids: NDArray[np.int32],
    dists: NDArray[np.float32],
    flags: NDArray[np.uint8],
    reverse_degree: NDArray[np.int32],
    owner: int,
    node: int,
    dist: float,
) -> int:
    """Offer (node, dist) to owner's row, flagged new.

    Rejects self-loops, ids already present and distances not strictly
    below the current maximum. On success the evicted id loses one unit of
    reverse degree and ``node`` gains one.

    Returns:
        1 if the row changed, else 0.
    """
    if node == owner or not dist < dists[owner, 0]:
        return 0
    row_ids = ids[owner]
    for j in range(row_ids.shape[0]):
        if row_ids[j] == node:
            return 0

    evicted = row_ids[0]
    if evicted >= 0:
        reverse_degree[evicted] -= 1
    reverse_degree[node] += 1
    sift_down(row_ids, dists[owner], flags[owner], dist, node, FLAG_NEW)
    return 1


@numba.njit(cache=True)
def fill_random(
    ids: NDArray[np.int32],
    dists: NDArray[np.float32],
    flags: NDArray[np.uint8],
    reverse_degree: NDArray[np.int32],
    data: NDArray[np.float32],
    k: int,
    width: int,
    rng_state: NDArray[np.int64],
    counter_cell: NDArray[np.int64],
) -> None:
    """Give every row k distinct random neighbors with true distances."""
    n = ids.shape[0]
    for i in range(n):
        count = 0
        while count < k:
            v = tau_rand_int(rng_state) % n
            if v == i:
                continue
            seen = False
            for j in range(k):
                if ids[i, j] == v:
                    seen = True
                    break
            if seen:
                continue
            d = l2_sq_rows(data[i], data[v], width)
            heap_try_insert(ids, dists, flags, reverse_degree, i, v, d)
            count += 1
    counter_cell[0] += n * k


@numba.njit(cache=True, boundscheck=False)
def flag_consumed_rows(
    ids: NDArray[np.int32],
    flags: NDArray[np.uint8],
    consumed: NDArray[np.int32],
    consumed_counts: NDArray[np.int32],
) -> None:
    """Flag old every new entry of row u whose id is in consumed[u, :consumed_counts[u]]."""
    n, k = ids.shape
    for u in range(n):
        for j in range(k):
            if flags[u, j] != FLAG_NEW:
                continue
            v = ids[u, j]
            for s in range(consumed_counts[u]):
                if consumed[u, s] == v:
                    flags[u, j] = FLAG_OLD
                    break


@numba.njit(cache=True, boundscheck=False)
def remap_rows(
    ids: NDArray[np.int32],
    dists: NDArray[np.float32],
    flags: NDArray[np.uint8],
    sigma: NDArray[np.int64],
) -> tuple[NDArray[np.int32], NDArray[np.float32], NDArray[np.uint8]]:
    """Move row u to row sigma[u] and relabel every stored id through sigma."""
    n, k = ids.shape
    new_ids = np.empty_like(ids)
    new_dists = np.empty_like(dists)
    new_flags = np.empty_like(flags)
    for u in range(n):
        target = sigma[u]
        for j in range(k):
            v = ids[u, j]
            new_ids[target, j] = sigma[v] if v >= 0 else v
            new_dists[target, j] = dists[u, j]
            new_flags[target, j] = flags[u, j]
    return new_ids, new_dists, new_flags
