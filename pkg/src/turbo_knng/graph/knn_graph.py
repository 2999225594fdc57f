"""Mutable K-NNG approximation.

Each node owns a bounded max-heap of k (id, distance, is_new) entries.
``reverse_degree[u]`` tracks |N(u)| = k forward edges plus the number of
heaps naming u, and is updated on every successful insert and eviction.
"""

from __future__ import annotations

from collections.abc import Iterable
from typing import TYPE_CHECKING

import numpy as np
import structlog
from numpy.typing import NDArray

from turbo_knng.dataset.storage import Dataset
from turbo_knng.distance.counter import EvalCounter
from turbo_knng.errors import GraphInvariantError, ParameterError
from turbo_knng.graph.heap import (
    FLAG_NEW,
    fill_random,
    flag_consumed_rows,
    heap_try_insert,
    remap_rows,
)
from turbo_knng.graph.table import NeighborTable, sort_rows
from turbo_knng.rng import make_rng_state

if TYPE_CHECKING:
    from turbo_knng.reorder.permutation import Permutation

logger = structlog.get_logger()


class KnnGraph:
    """Per-node neighbor heaps with new/old flags and reverse degrees.

    Attributes:
        ids: int32 array (n, k), heap-ordered per row.
        dists: float32 array (n, k), largest at column 0.
        flags: uint8 array (n, k), 1 = new.
        reverse_degree: int32 array (n,).
    """

    def __init__(
        self,
        ids: NDArray[np.int32],
        dists: NDArray[np.float32],
        flags: NDArray[np.uint8],
        reverse_degree: NDArray[np.int32],
    ) -> None:
        """Wrap existing heap arrays.

        Args:
            ids: Neighbor ids, shape (n, k).
            dists: Squared distances, shape (n, k).
            flags: New/old flags, shape (n, k).
            reverse_degree: |N(u)| per node, shape (n,).

        Raises:
            ParameterError: If the shapes or dtypes disagree.
        """
        if ids.ndim != 2 or ids.shape != dists.shape or ids.shape != flags.shape:
            raise ParameterError("ids, dists and flags must share one (n, k) shape")
        if reverse_degree.shape != (ids.shape[0],):
            raise ParameterError("reverse_degree must have one entry per node")
        self.ids = np.ascontiguousarray(ids, dtype=np.int32)
        self.dists = np.ascontiguousarray(dists, dtype=np.float32)
        self.flags = np.ascontiguousarray(flags, dtype=np.uint8)
        self.reverse_degree = np.ascontiguousarray(reverse_degree, dtype=np.int32)
        self._changes = 0
        self._logger = logger.bind(component="knn_graph")

    @classmethod
    def empty(cls, n: int, k: int) -> KnnGraph:
        """Graph whose heaps hold only empty slots (id -1, distance +inf)."""
        return cls(
            ids=np.full((n, k), -1, dtype=np.int32),
            dists=np.full((n, k), np.inf, dtype=np.float32),
            flags=np.zeros((n, k), dtype=np.uint8),
            reverse_degree=np.full(n, k, dtype=np.int32),
        )

    @classmethod
    def init_random(
        cls, dataset: Dataset, k: int, seed: int, counter: EvalCounter
    ) -> KnnGraph:
        """Give every node k distinct uniform-random neighbors.

        Args:
            dataset: Points the distances are computed on.
            k: Neighbors per node, 2 <= k < n.
            seed: RNG seed.
            counter: Incremented by n*k.

        Returns:
            Full graph with every entry flagged new.

        Raises:
            ParameterError: If k is out of range.
        """
        if k < 2 or k >= dataset.n:
            raise ParameterError(f"k must satisfy 2 <= k < n, got k={k}, n={dataset.n}")

        graph = cls.empty(dataset.n, k)
        fill_random(
            graph.ids,
            graph.dists,
            graph.flags,
            graph.reverse_degree,
            dataset.values,
            k,
            dataset.row_stride,
            make_rng_state(seed),
            counter.cell,
        )
        graph._logger.debug("graph_initialized", n=dataset.n, k=k, seed=seed)
        return graph

    @property
    def n(self) -> int:
        return int(self.ids.shape[0])

    @property
    def k(self) -> int:
        return int(self.ids.shape[1])

    def try_insert(self, u: int, v: int, dist: float) -> bool:
        """Offer v as a neighbor of u.

        Args:
            u: Owning node.
            v: Candidate neighbor.
            dist: Squared distance between u and v.

        Returns:
            True if v entered u's heap (strict improvement, not a duplicate,
            not a self-loop).
        """
        changed = heap_try_insert(
            self.ids, self.dists, self.flags, self.reverse_degree, u, v, np.float32(dist)
        )
        self._changes += changed
        return bool(changed)

    def flag_consumed(self, u: int, sampled_new_ids: Iterable[int]) -> None:
        """Mark u's entries with the given ids as old; missing ids are skipped."""
        consumed = np.fromiter(sampled_new_ids, dtype=np.int32)
        flag_consumed_rows(
            self.ids[u : u + 1],
            self.flags[u : u + 1],
            consumed[np.newaxis, :],
            np.array([consumed.size], dtype=np.int32),
        )

    def flag_sampled(self, new_ids: NDArray[np.int32], new_counts: NDArray[np.int32]) -> None:
        """Flag old, for every node u, the entries sampled into u's new candidates.

        Args:
            new_ids: Array (n, cap) of sampled new ids per node.
            new_counts: Valid prefix length of each row of ``new_ids``.
        """
        flag_consumed_rows(self.ids, self.flags, new_ids, new_counts)

    def changes_in_last_pass(self) -> int:
        """Successful inserts since the last ``reset_changes``."""
        return self._changes

    def record_changes(self, count: int) -> None:
        """Add inserts performed directly on the heap arrays by jitted code."""
        self._changes += count

    def reset_changes(self) -> None:
        self._changes = 0

    def neighbors(self, u: int) -> NDArray[np.int32]:
        """Ids in u's heap, sorted by distance then id."""
        ids, _ = sort_rows(self.ids[u : u + 1], self.dists[u : u + 1])
        return ids[0]

    def is_new(self, u: int, v: int) -> bool:
        """Flag of v in u's heap.

        Raises:
            KeyError: If v is not one of u's neighbors.
        """
        hits = np.flatnonzero(self.ids[u] == v)
        if hits.size == 0:
            raise KeyError(f"{v} is not a neighbor of {u}")
        return bool(self.flags[u, hits[0]] == FLAG_NEW)

    def to_table(self) -> NeighborTable:
        """Sorted snapshot of the graph."""
        ids, dists = sort_rows(self.ids, self.dists)
        return NeighborTable(ids=ids, dists=dists)

    def copy(self) -> KnnGraph:
        clone = KnnGraph(
            self.ids.copy(), self.dists.copy(), self.flags.copy(), self.reverse_degree.copy()
        )
        clone._changes = self._changes
        return clone

    def remap(self, perm: Permutation) -> None:
        """Relabel the graph through a permutation, in place.

        Row sigma(u) afterwards holds node u's heap and every stored id v
        becomes sigma(v).

        Raises:
            ParameterError: If the permutation size differs from n.
        """
        if perm.n != self.n:
            raise ParameterError(f"permutation size {perm.n} does not match graph size {self.n}")
        self.ids, self.dists, self.flags = remap_rows(self.ids, self.dists, self.flags, perm.sigma)
        degree = np.empty_like(self.reverse_degree)
        degree[perm.sigma] = self.reverse_degree
        self.reverse_degree = degree

    def recount_reverse_degree(self) -> NDArray[np.int32]:
        """|N(u)| recomputed from the stored edges."""
        valid = self.ids[self.ids >= 0]
        return (np.bincount(valid, minlength=self.n) + self.k).astype(np.int32)

    def check_invariants(self) -> None:
        """Full scan of every structural invariant.

        Raises:
            GraphInvariantError: On the first violated invariant.
        """
        n, k = self.ids.shape
        if np.any(self.ids < 0) or np.any(self.ids >= n):
            raise GraphInvariantError("heap holds an empty slot or out-of-range id")
        if np.any(self.ids == np.arange(n, dtype=np.int32)[:, np.newaxis]):
            raise GraphInvariantError("heap holds a self-loop")
        ordered = np.sort(self.ids, axis=1)
        if np.any(ordered[:, 1:] == ordered[:, :-1]):
            raise GraphInvariantError("heap holds a duplicate id")
        if np.any(self.dists < 0) or not np.all(np.isfinite(self.dists)):
            raise GraphInvariantError("heap holds a negative or non-finite distance")

        children = np.arange(1, k)
        parents = (children - 1) // 2
        if np.any(self.dists[:, parents] < self.dists[:, children]):
            raise GraphInvariantError("heap order violated")

        if not np.array_equal(self.reverse_degree, self.recount_reverse_degree()):
            raise GraphInvariantError("reverse_degree disagrees with stored edges")


def init_random(dataset: Dataset, k: int, seed: int, counter: EvalCounter) -> KnnGraph:
    """Random initial K-NNG; see ``KnnGraph.init_random``."""
    return KnnGraph.init_random(dataset, k, seed, counter)
