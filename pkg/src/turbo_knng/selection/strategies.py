"""Candidate selection strategies.

All three strategies build, for every node u, a sample of
N(u) = adj(u) ∪ reverse-adj(u) holding at most ``max_candidates`` distinct
ids. A candidate is routed to the new list when the graph entry that
produced it is flagged new, otherwise to the old list. Afterwards every
heap entry whose id landed in its owner's new list is flagged old.

- ``naive`` materializes the reverse graph, forms the unions and samples
  each union, in three separate passes.
- ``fused`` makes one pass over the edges, pushing both endpoints into
  bounded max-heaps keyed by a per-pair random weight and keeping the
  smallest weights.
- ``turbo`` makes one pass over the edges without heaps, accepting each
  endpoint with probability min(1, max_candidates / |N(u)|).
"""

from collections.abc import Callable
from typing import Literal, get_args

import numba
import numpy as np
import structlog
from numpy.typing import NDArray

from turbo_knng.errors import ParameterError
from turbo_knng.graph.heap import FLAG_NEW
from turbo_knng.graph.knn_graph import KnnGraph
from turbo_knng.rng import make_rng_state, pair_weight, tau_rand, tau_rand_int
from turbo_knng.selection.candidates import CandidateSet

logger = structlog.get_logger()

SelectionStrategy = Literal["naive", "fused", "turbo"]
STRATEGIES: tuple[str, ...] = get_args(SelectionStrategy)

PROBE_EDGE_READS = 0
PROBE_OFFERS = 1


@numba.njit(cache=True, boundscheck=False)
def _pool_contains(pool_ids: NDArray[np.int32], u: int, size: int, v: int) -> bool:
    for s in range(size):
        if pool_ids[u, s] == v:
            return True
    return False


@numba.njit(cache=True, boundscheck=False)
def _offer_weighted(
    pool_ids: NDArray[np.int32],
    pool_weights: NDArray[np.float64],
    pool_flags: NDArray[np.uint8],
    pool_size: NDArray[np.int32],
    u: int,
    v: int,
    weight: float,
    flag: int,
    cap: int,
) -> None:
    """Push v into u's bounded max-heap keyed by weight, keeping the cap smallest."""
    size = pool_size[u]
    if _pool_contains(pool_ids, u, size, v):
        return

    if size < cap:
        i = size
        while i > 0:
            parent = (i - 1) // 2
            if pool_weights[u, parent] >= weight:
                break
            pool_ids[u, i] = pool_ids[u, parent]
            pool_weights[u, i] = pool_weights[u, parent]
            pool_flags[u, i] = pool_flags[u, parent]
            i = parent
        pool_ids[u, i] = v
        pool_weights[u, i] = weight
        pool_flags[u, i] = flag
        pool_size[u] = size + 1
        return

    if weight >= pool_weights[u, 0]:
        return
    i = 0
    while True:
        left = 2 * i + 1
        right = left + 1
        if left >= cap:
            break
        if right >= cap or pool_weights[u, left] >= pool_weights[u, right]:
            swap = left
        else:
            swap = right
        if pool_weights[u, swap] <= weight:
            break
        pool_ids[u, i] = pool_ids[u, swap]
        pool_weights[u, i] = pool_weights[u, swap]
        pool_flags[u, i] = pool_flags[u, swap]
        i = swap
    pool_ids[u, i] = v
    pool_weights[u, i] = weight
    pool_flags[u, i] = flag


@numba.njit(cache=True, boundscheck=False)
def _fused_pass(
    ids: NDArray[np.int32],
    flags: NDArray[np.uint8],
    key: int,
    cap: int,
    pool_ids: NDArray[np.int32],
    pool_weights: NDArray[np.float64],
    pool_flags: NDArray[np.uint8],
    pool_size: NDArray[np.int32],
    probe: NDArray[np.int64],
) -> None:
    """Offer both endpoints of every edge to the weighted pools."""
    n, k = ids.shape
    for u in range(n):
        for j in range(k):
            v = ids[u, j]
            flag = flags[u, j]
            probe[PROBE_EDGE_READS] += 1
            if v < 0:
                continue
            weight = pair_weight(key, u, v)
            _offer_weighted(pool_ids, pool_weights, pool_flags, pool_size, u, v, weight, flag, cap)
            _offer_weighted(pool_ids, pool_weights, pool_flags, pool_size, v, u, weight, flag, cap)
            probe[PROBE_OFFERS] += 2


@numba.njit(cache=True, boundscheck=False)
def _offer_turbo(
    pool_ids: NDArray[np.int32],
    pool_flags: NDArray[np.uint8],
    pool_size: NDArray[np.int32],
    u: int,
    v: int,
    flag: int,
    cap: int,
    reverse_degree: NDArray[np.int32],
    rng_state: NDArray[np.int64],
) -> None:
    size = pool_size[u]
    if _pool_contains(pool_ids, u, size, v):
        return
    degree = reverse_degree[u]
    if degree > cap and tau_rand(rng_state) * degree >= cap:
        return
    if size < cap:
        pool_ids[u, size] = v
        pool_flags[u, size] = flag
        pool_size[u] = size + 1
    else:
        slot = tau_rand_int(rng_state) % cap
        pool_ids[u, slot] = v
        pool_flags[u, slot] = flag


@numba.njit(cache=True, boundscheck=False)
def _turbo_pass(
    ids: NDArray[np.int32],
    flags: NDArray[np.uint8],
    reverse_degree: NDArray[np.int32],
    cap: int,
    rng_state: NDArray[np.int64],
    pool_ids: NDArray[np.int32],
    pool_flags: NDArray[np.uint8],
    pool_size: NDArray[np.int32],
    probe: NDArray[np.int64],
) -> None:
    """Offer both endpoints of every edge with degree-scaled acceptance."""
    n, k = ids.shape
    for u in range(n):
        for j in range(k):
            v = ids[u, j]
            flag = flags[u, j]
            probe[PROBE_EDGE_READS] += 1
            if v < 0:
                continue
            _offer_turbo(pool_ids, pool_flags, pool_size, u, v, flag, cap, reverse_degree, rng_state)
            _offer_turbo(pool_ids, pool_flags, pool_size, v, u, flag, cap, reverse_degree, rng_state)
            probe[PROBE_OFFERS] += 2


@numba.njit(cache=True, boundscheck=False)
def _split_pool(
    pool_ids: NDArray[np.int32],
    pool_flags: NDArray[np.uint8],
    pool_size: NDArray[np.int32],
    new_ids: NDArray[np.int32],
    old_ids: NDArray[np.int32],
    new_counts: NDArray[np.int32],
    old_counts: NDArray[np.int32],
) -> None:
    """Copy each pool into the new or old list by its recorded flag."""
    for u in range(pool_size.shape[0]):
        n_new = 0
        n_old = 0
        for s in range(pool_size[u]):
            if pool_flags[u, s] == FLAG_NEW:
                new_ids[u, n_new] = pool_ids[u, s]
                n_new += 1
            else:
                old_ids[u, n_old] = pool_ids[u, s]
                n_old += 1
        new_counts[u] = n_new
        old_counts[u] = n_old


@numba.njit(cache=True, boundscheck=False)
def _reverse_pass(
    ids: NDArray[np.int32], flags: NDArray[np.uint8]
) -> tuple[NDArray[np.int64], NDArray[np.int32], NDArray[np.uint8]]:
    """Materialize the reverse graph in CSR form, sources in ascending order."""
    n, k = ids.shape
    offsets = np.zeros(n + 1, dtype=np.int64)
    for u in range(n):
        for j in range(k):
            v = ids[u, j]
            if v >= 0:
                offsets[v + 1] += 1
    for u in range(n):
        offsets[u + 1] += offsets[u]
    sources = np.empty(offsets[n], dtype=np.int32)
    source_flags = np.empty(offsets[n], dtype=np.uint8)
    fill = offsets[:n].copy()
    for u in range(n):
        for j in range(k):
            v = ids[u, j]
            if v >= 0:
                sources[fill[v]] = u
                source_flags[fill[v]] = flags[u, j]
                fill[v] += 1
    return offsets, sources, source_flags


@numba.njit(cache=True, boundscheck=False)
def _union_pass(
    ids: NDArray[np.int32],
    flags: NDArray[np.uint8],
    offsets: NDArray[np.int64],
    sources: NDArray[np.int32],
    source_flags: NDArray[np.uint8],
) -> tuple[NDArray[np.int64], NDArray[np.int32], NDArray[np.uint8]]:
    """Deduplicated N(u) per node, forward entries first; the first offer's flag wins."""
    n, k = ids.shape
    starts = np.zeros(n + 1, dtype=np.int64)
    members = np.empty(n * k + offsets[n], dtype=np.int32)
    member_flags = np.empty(n * k + offsets[n], dtype=np.uint8)
    stamp = np.full(n, -1, dtype=np.int64)
    size = 0
    for u in range(n):
        for j in range(k):
            v = ids[u, j]
            if v >= 0 and stamp[v] != u:
                stamp[v] = u
                members[size] = v
                member_flags[size] = flags[u, j]
                size += 1
        for r in range(offsets[u], offsets[u + 1]):
            v = sources[r]
            if stamp[v] != u:
                stamp[v] = u
                members[size] = v
                member_flags[size] = source_flags[r]
                size += 1
        starts[u + 1] = size
    return starts, members, member_flags


@numba.njit(cache=True, boundscheck=False)
def _sample_pass(
    starts: NDArray[np.int64],
    members: NDArray[np.int32],
    member_flags: NDArray[np.uint8],
    cap: int,
    rng_state: NDArray[np.int64],
    new_ids: NDArray[np.int32],
    old_ids: NDArray[np.int32],
    new_counts: NDArray[np.int32],
    old_counts: NDArray[np.int32],
) -> None:
    """Keep a uniform subset of at most ``cap`` members per node and route it by flag."""
    n = starts.shape[0] - 1
    picks = np.empty(0, dtype=np.int64)
    for u in range(n):
        lo = starts[u]
        size = starts[u + 1] - lo
        if size > picks.shape[0]:
            picks = np.empty(size, dtype=np.int64)
        for s in range(size):
            picks[s] = s
        take = size
        if size > cap:
            # partial Fisher-Yates, then restore union order
            for s in range(cap):
                r = s + tau_rand_int(rng_state) % (size - s)
                picks[s], picks[r] = picks[r], picks[s]
            picks[:cap].sort()
            take = cap
        n_new = 0
        n_old = 0
        for s in range(take):
            m = lo + picks[s]
            if member_flags[m] == FLAG_NEW:
                new_ids[u, n_new] = members[m]
                n_new += 1
            else:
                old_ids[u, n_old] = members[m]
                n_old += 1
        new_counts[u] = n_new
        old_counts[u] = n_old


def _prepare(graph: KnnGraph, max_candidates: int, out: CandidateSet | None) -> CandidateSet:
    if max_candidates < 1:
        raise ParameterError(f"max_candidates must be positive, got {max_candidates}")
    if out is None or not out.fits(graph.n, max_candidates):
        return CandidateSet.allocate(graph.n, max_candidates)
    out.clear()
    return out


def _probe_cell(probe: NDArray[np.int64] | None) -> NDArray[np.int64]:
    if probe is None:
        return np.zeros(2, dtype=np.int64)
    if probe.shape != (2,) or probe.dtype != np.int64:
        raise ParameterError("probe must be an int64 array of length 2")
    return probe


def _finish(
    graph: KnnGraph,
    candidates: CandidateSet,
    pool_ids: NDArray[np.int32],
    pool_flags: NDArray[np.uint8],
    pool_size: NDArray[np.int32],
) -> None:
    _split_pool(
        pool_ids,
        pool_flags,
        pool_size,
        candidates.new_ids,
        candidates.old_ids,
        candidates.new_counts,
        candidates.old_counts,
    )
    graph.flag_sampled(candidates.new_ids, candidates.new_counts)


def select_naive(
    graph: KnnGraph,
    max_candidates: int,
    seed: int,
    out: CandidateSet | None = None,
) -> CandidateSet:
    """Reverse, union and sample in three separate passes.

    The reverse graph and every union N(u) are materialized before any
    sampling, so this strategy pays for the intermediate storage the other
    two avoid.

    Args:
        graph: Current approximation; its new flags are updated.
        max_candidates: Cap on each node's candidate count.
        seed: RNG seed for the sampling pass.
        out: Optional buffer to refill.

    Returns:
        Candidate sets for this iteration.
    """
    candidates = _prepare(graph, max_candidates, out)

    offsets, sources, source_flags = _reverse_pass(graph.ids, graph.flags)
    starts, members, member_flags = _union_pass(
        graph.ids, graph.flags, offsets, sources, source_flags
    )
    _sample_pass(
        starts, members, member_flags, max_candidates, make_rng_state(seed),
        candidates.new_ids, candidates.old_ids, candidates.new_counts, candidates.old_counts,
    )
    graph.flag_sampled(candidates.new_ids, candidates.new_counts)
    return candidates


def select_fused(
    graph: KnnGraph,
    max_candidates: int,
    seed: int,
    out: CandidateSet | None = None,
    probe: NDArray[np.int64] | None = None,
) -> CandidateSet:
    """One pass over the edges into weight-keyed bounded heaps.

    Each unordered pair {u, v} gets one pseudo-random weight derived from
    the seed, so both directions of a mutual edge agree and the result for
    u is a uniform random subset of N(u) of size min(|N(u)|, max_candidates).

    Args:
        graph: Current approximation; its new flags are updated.
        max_candidates: Cap on each node's candidate count.
        seed: RNG seed for the pair weights.
        out: Optional buffer to refill.
        probe: Optional int64[2] accumulating edge reads and endpoint offers.

    Returns:
        Candidate sets for this iteration.
    """
    candidates = _prepare(graph, max_candidates, out)
    n = graph.n
    pool_ids = np.full((n, max_candidates), -1, dtype=np.int32)
    pool_weights = np.full((n, max_candidates), np.inf, dtype=np.float64)
    pool_flags = np.zeros((n, max_candidates), dtype=np.uint8)
    pool_size = np.zeros(n, dtype=np.int32)
    key = int(make_rng_state(seed)[0])

    _fused_pass(
        graph.ids, graph.flags, key, max_candidates,
        pool_ids, pool_weights, pool_flags, pool_size, _probe_cell(probe),
    )
    _finish(graph, candidates, pool_ids, pool_flags, pool_size)
    return candidates


def select_turbo(
    graph: KnnGraph,
    max_candidates: int,
    seed: int,
    out: CandidateSet | None = None,
    probe: NDArray[np.int64] | None = None,
) -> CandidateSet:
    """One heapless pass over the edges with degree-scaled acceptance.

    Endpoint v enters u's list with probability
    min(1, max_candidates / reverse_degree[u]). Once a list is full, an
    accepted candidate overwrites a uniformly random slot.

    Args:
        graph: Current approximation; its new flags are updated.
        max_candidates: Cap on each node's candidate count.
        seed: RNG seed for the acceptance draws.
        out: Optional buffer to refill.
        probe: Optional int64[2] accumulating edge reads and endpoint offers.

    Returns:
        Candidate sets for this iteration.
    """
    candidates = _prepare(graph, max_candidates, out)
    n = graph.n
    pool_ids = np.full((n, max_candidates), -1, dtype=np.int32)
    pool_flags = np.zeros((n, max_candidates), dtype=np.uint8)
    pool_size = np.zeros(n, dtype=np.int32)

    _turbo_pass(
        graph.ids, graph.flags, graph.reverse_degree, max_candidates, make_rng_state(seed),
        pool_ids, pool_flags, pool_size, _probe_cell(probe),
    )
    _finish(graph, candidates, pool_ids, pool_flags, pool_size)
    return candidates


_SELECTORS: dict[str, Callable[..., CandidateSet]] = {
    "naive": select_naive,
    "fused": select_fused,
    "turbo": select_turbo,
}


def select(
    strategy: SelectionStrategy,
    graph: KnnGraph,
    max_candidates: int,
    seed: int,
    out: CandidateSet | None = None,
) -> CandidateSet:
    """Dispatch to the named strategy.

    Raises:
        ParameterError: If the strategy name is unknown.
    """
    try:
        selector = _SELECTORS[strategy]
    except KeyError as e:
        raise ParameterError(
            f"unknown selection strategy {strategy!r}, expected one of {', '.join(STRATEGIES)}"
        ) from e

    candidates = selector(graph, max_candidates, seed, out=out)
    logger.debug(
        "candidates_selected",
        strategy=strategy,
        new_total=int(candidates.new_counts.sum()),
        old_total=int(candidates.old_counts.sum()),
    )
    return candidates
