"""Per-iteration candidate sets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from turbo_knng.errors import GraphInvariantError, ParameterError


@dataclass(eq=False)
class CandidateSet:
    """Sampled neighborhood of every node, split into new and old ids.

    Rows are packed: entries ``[0, count)`` are valid, the rest hold -1.
    The combined size of a node's two lists never exceeds
    ``max_candidates``. Instances are scratch space and can be refilled
    every iteration.

    Attributes:
        new_ids: int32 array (n, max_candidates).
        old_ids: int32 array (n, max_candidates).
        new_counts: int32 array (n,).
        old_counts: int32 array (n,).
        max_candidates: Cap on each node's combined candidate count.
    """

    new_ids: NDArray[np.int32]
    old_ids: NDArray[np.int32]
    new_counts: NDArray[np.int32]
    old_counts: NDArray[np.int32]
    max_candidates: int

    @classmethod
    def allocate(cls, n: int, max_candidates: int) -> CandidateSet:
        """Empty candidate set for n nodes.

        Raises:
            ParameterError: If max_candidates < 1.
        """
        if max_candidates < 1:
            raise ParameterError(f"max_candidates must be positive, got {max_candidates}")
        return cls(
            new_ids=np.full((n, max_candidates), -1, dtype=np.int32),
            old_ids=np.full((n, max_candidates), -1, dtype=np.int32),
            new_counts=np.zeros(n, dtype=np.int32),
            old_counts=np.zeros(n, dtype=np.int32),
            max_candidates=max_candidates,
        )

    @property
    def n(self) -> int:
        return int(self.new_counts.shape[0])

    def clear(self) -> None:
        self.new_ids.fill(-1)
        self.old_ids.fill(-1)
        self.new_counts.fill(0)
        self.old_counts.fill(0)

    def fits(self, n: int, max_candidates: int) -> bool:
        """Whether this buffer can be reused for the given shape."""
        return self.n == n and self.max_candidates == max_candidates

    def new_of(self, u: int) -> NDArray[np.int32]:
        return self.new_ids[u, : self.new_counts[u]]

    def old_of(self, u: int) -> NDArray[np.int32]:
        return self.old_ids[u, : self.old_counts[u]]

    def sizes(self) -> NDArray[np.int32]:
        """Combined candidate count per node."""
        return self.new_counts + self.old_counts

    def total(self) -> int:
        return int(self.sizes().sum())

    def check_invariants(self) -> None:
        """Scan for duplicates, self-candidates and overfull rows.

        Raises:
            GraphInvariantError: On the first violation found.
        """
        if np.any(self.sizes() > self.max_candidates):
            raise GraphInvariantError("candidate row exceeds max_candidates")
        for u in range(self.n):
            merged = np.concatenate([self.new_of(u), self.old_of(u)])
            if np.any(merged < 0) or np.any(merged == u):
                raise GraphInvariantError(f"node {u} lists an invalid or self candidate")
            if np.unique(merged).size != merged.size:
                raise GraphInvariantError(f"node {u} lists a duplicate candidate")
