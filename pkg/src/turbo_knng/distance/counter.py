"""Per-run distance evaluation counter."""

import numpy as np
from numpy.typing import NDArray


class EvalCounter:
    """Monotone count of squared-L2 evaluations.

    The count lives in a one-element int64 array so jitted kernels can
    increment it in place.
    """

    def __init__(self) -> None:
        self.cell: NDArray[np.int64] = np.zeros(1, dtype=np.int64)

    @property
    def dist_evals(self) -> int:
        return int(self.cell[0])

    def add(self, count: int) -> None:
        """Record ``count`` completed evaluations.

        Raises:
            ValueError: If count is negative.
        """
        if count < 0:
            raise ValueError(f"evaluation count must be non-negative, got {count}")
        self.cell[0] += count

    def flops(self, d: int) -> int:
        """Floating-point operations implied by the count: d subs, d muls, d-1 adds each."""
        return self.dist_evals * (3 * d - 1)

    def __repr__(self) -> str:
        return f"EvalCounter(dist_evals={self.dist_evals})"
