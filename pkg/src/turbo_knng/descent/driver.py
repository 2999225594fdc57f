"""NN-Descent iteration driver.

Each iteration selects candidates, then runs the local join: every
new x new and new x old pair inside a node's candidate set is evaluated and
offered to both endpoints' heaps. The loop stops when an iteration changes
fewer than termination_delta * n * k entries or after max_iterations.
"""

from collections.abc import Callable
from time import perf_counter
from typing import NamedTuple

import numba
import numpy as np
import structlog
from numpy.typing import NDArray

from turbo_knng.dataset.storage import Dataset, apply_permutation
from turbo_knng.descent.metrics import IterationMetrics, RunMetrics
from turbo_knng.descent.params import DistanceKernel, RunParams
from turbo_knng.distance.counter import EvalCounter
from turbo_knng.distance.kernels import (
    cross_distances,
    cross_distances_scalar,
    mutual_distances,
    mutual_distances_scalar,
)
from turbo_knng.errors import ParameterError
from turbo_knng.graph.heap import heap_try_insert
from turbo_knng.graph.knn_graph import KnnGraph
from turbo_knng.reorder.greedy import greedy_cluster
from turbo_knng.reorder.permutation import Permutation
from turbo_knng.rng import spawn_seeds
from turbo_knng.selection.candidates import CandidateSet
from turbo_knng.selection.strategies import select

logger = structlog.get_logger()

IterationObserver = Callable[[int, KnnGraph], None]


class RunOutcome(NamedTuple):
    """Result of ``run``; the graph is expressed in original ids."""

    graph: KnnGraph
    metrics: RunMetrics
    permutation: Permutation | None


@numba.njit(cache=True, boundscheck=False)
def _local_join(
    data: NDArray[np.float32],
    width: int,
    ids: NDArray[np.int32],
    dists: NDArray[np.float32],
    flags: NDArray[np.uint8],
    reverse_degree: NDArray[np.int32],
    new_ids: NDArray[np.int32],
    new_counts: NDArray[np.int32],
    old_ids: NDArray[np.int32],
    old_counts: NDArray[np.int32],
    blocked: bool,
    counter_cell: NDArray[np.int64],
) -> int:
    """Join new x new and new x old candidate pairs of every node; return the insert count."""
    n = new_counts.shape[0]
    cap = new_ids.shape[1]
    pair_new = np.zeros((cap, cap), dtype=np.float32)
    pair_old = np.zeros((cap, cap), dtype=np.float32)
    changes = 0

    for u in range(n):
        m_new = new_counts[u]
        if m_new == 0:
            continue
        m_old = old_counts[u]
        row_new = new_ids[u]
        row_old = old_ids[u]

        if blocked:
            mutual_distances(data, row_new, m_new, width, pair_new, counter_cell)
            cross_distances(data, row_new, m_new, row_old, m_old, width, pair_old, counter_cell)
        else:
            mutual_distances_scalar(data, row_new, m_new, width, pair_new, counter_cell)
            cross_distances_scalar(data, row_new, m_new, row_old, m_old, width, pair_old, counter_cell)

        for i in range(m_new):
            a = row_new[i]
            for j in range(i + 1, m_new):
                b = row_new[j]
                dist = pair_new[i, j]
                changes += heap_try_insert(ids, dists, flags, reverse_degree, a, b, dist)
                changes += heap_try_insert(ids, dists, flags, reverse_degree, b, a, dist)
            for j in range(m_old):
                b = row_old[j]
                dist = pair_old[i, j]
                changes += heap_try_insert(ids, dists, flags, reverse_degree, a, b, dist)
                changes += heap_try_insert(ids, dists, flags, reverse_degree, b, a, dist)

    return changes


def compute_step(
    graph: KnnGraph,
    candidates: CandidateSet,
    dataset: Dataset,
    counter: EvalCounter,
    kernel: DistanceKernel = "blocked",
) -> int:
    """Local join over every node's candidate set.

    Args:
        graph: Graph updated in place.
        candidates: This iteration's candidate sets.
        dataset: Points in the graph's current id layout.
        counter: Incremented once per evaluated pair.
        kernel: ``blocked`` tiles pairs 5x5, ``scalar`` evaluates them one by one.

    Returns:
        Number of successful inserts.

    Raises:
        ParameterError: If graph, candidates and dataset sizes differ.
    """
    if not (graph.n == candidates.n == dataset.n):
        raise ParameterError(
            f"size mismatch: graph n={graph.n}, candidates n={candidates.n}, dataset n={dataset.n}"
        )
    changes = int(
        _local_join(
            dataset.values,
            dataset.row_stride,
            graph.ids,
            graph.dists,
            graph.flags,
            graph.reverse_degree,
            candidates.new_ids,
            candidates.new_counts,
            candidates.old_ids,
            candidates.old_counts,
            kernel == "blocked",
            counter.cell,
        )
    )
    graph.record_changes(changes)
    return changes


def run(
    dataset: Dataset,
    params: RunParams,
    observer: IterationObserver | None = None,
) -> RunOutcome:
    """Build an approximate K-NNG.

    Args:
        dataset: Input points.
        params: Run parameters.
        observer: Called after every iteration with the iteration number and
            the live graph (in permuted ids once a reorder has happened).

    Returns:
        RunOutcome of graph (original ids), metrics and the applied
        permutation, if any.

    Raises:
        ParameterError: If k >= n.
    """
    n, k = dataset.n, params.k
    if k >= n:
        raise ParameterError(f"k must be smaller than n, got k={k}, n={n}")

    log = logger.bind(component="descent", n=n, d=dataset.d, k=k)
    counter = EvalCounter()
    metrics = RunMetrics(n=n, d=dataset.d)
    seeds = spawn_seeds(params.seed, params.max_iterations + 1)
    threshold = params.termination_delta * n * k
    flops_per_eval = 3 * dataset.d - 1

    started = perf_counter()
    graph = KnnGraph.init_random(dataset, k, seeds[0], counter)
    elapsed = perf_counter() - started
    init_evals = counter.dist_evals
    metrics.record(
        IterationMetrics(
            iteration=0,
            wall_time_s=elapsed,
            dist_evals=init_evals,
            changes=n * k,
            compute_s=elapsed,
            flops=init_evals * flops_per_eval,
        )
    )

    layout = dataset
    permutation: Permutation | None = None
    candidates: CandidateSet | None = None

    for iteration in range(1, params.max_iterations + 1):
        evals_before = counter.dist_evals
        graph.reset_changes()

        started = perf_counter()
        candidates = select(
            params.selection_strategy, graph, params.max_candidates, seeds[iteration], out=candidates
        )
        selected = perf_counter()
        changes = compute_step(graph, candidates, layout, counter, params.kernel)
        computed = perf_counter()

        converged = changes < threshold
        if (
            not converged
            and params.reorder_enabled
            and permutation is None
            and iteration == params.reorder_after_iteration
        ):
            permutation = greedy_cluster(graph)
            layout = apply_permutation(layout, permutation)
            graph.remap(permutation)
            log.info("reorder_applied", iteration=iteration)
        finished = perf_counter()

        evals = counter.dist_evals - evals_before
        metrics.record(
            IterationMetrics(
                iteration=iteration,
                wall_time_s=finished - started,
                dist_evals=evals,
                changes=changes,
                selection_s=selected - started,
                compute_s=computed - selected,
                reorder_s=finished - computed,
                flops=evals * flops_per_eval,
            )
        )
        log.info(
            "iteration_completed",
            iteration=iteration,
            changes=changes,
            dist_evals=evals,
            wall_time_s=round(finished - started, 6),
        )
        if observer is not None:
            observer(iteration, graph)

        if converged:
            metrics.converged = True
            log.info("descent_converged", iteration=iteration, changes=changes)
            break

    if permutation is not None:
        graph.remap(permutation.inverse())

    return RunOutcome(graph=graph, metrics=metrics, permutation=permutation)
