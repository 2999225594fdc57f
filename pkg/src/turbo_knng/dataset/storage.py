"""Aligned point storage.

Rows are stored as 32-bit floats, padded with zeros to a multiple of eight
lanes, and start on 32-byte boundaries so the chunked kernels can read each
row eight components at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import ArrayLike, NDArray

from turbo_knng.errors import ParameterError

if TYPE_CHECKING:
    from turbo_knng.reorder.permutation import Permutation

LANES = 8
ALIGNMENT_BYTES = 32


def padded_width(d: int) -> int:
    """Smallest multiple of ``LANES`` that is at least ``d``."""
    return -(-d // LANES) * LANES


def aligned_zeros(n_rows: int, width: int) -> NDArray[np.float32]:
    """Allocate a zeroed, C-contiguous float32 matrix on a 32-byte boundary.

    Args:
        n_rows: Number of rows.
        width: Row length in elements (a multiple of ``LANES`` keeps every row aligned).

    Returns:
        Array of shape (n_rows, width).
    """
    count = n_rows * width
    itemsize = np.dtype(np.float32).itemsize
    raw = np.zeros(count + ALIGNMENT_BYTES // itemsize, dtype=np.float32)
    offset = (-raw.ctypes.data % ALIGNMENT_BYTES) // itemsize
    return raw[offset : offset + count].reshape(n_rows, width)


@dataclass(frozen=True, eq=False)
class Dataset:
    """n points in d dimensions, row-major, padded and aligned.

    Instances are read-only after construction; build them with
    ``Dataset.from_points`` unless the buffer already satisfies the layout.

    Attributes:
        values: Buffer of shape (n, row_stride); lanes beyond d are 0.0.
        d: Dimensionality.
    """

    values: NDArray[np.float32]
    d: int

    def __post_init__(self) -> None:
        values = self.values
        if values.ndim != 2 or values.dtype != np.float32:
            raise ParameterError("dataset values must be a 2-D float32 array")
        n, stride = values.shape
        if n < 2:
            raise ParameterError(f"dataset needs at least 2 points, got n={n}")
        if self.d < 1:
            raise ParameterError(f"dataset needs d >= 1, got d={self.d}")
        if stride != padded_width(self.d):
            raise ParameterError(
                f"row_stride {stride} must be the padded width {padded_width(self.d)} for d={self.d}"
            )
        if not values.flags.c_contiguous or values.ctypes.data % ALIGNMENT_BYTES:
            raise ParameterError("dataset buffer must be C-contiguous and 32-byte aligned")
        if not np.isfinite(values).all():
            bad = int(np.argmax(~np.isfinite(values).all(axis=1)))
            raise ParameterError(f"dataset values must be finite, row {bad} is not")
        if stride > self.d and np.any(values[:, self.d :]):
            raise ParameterError("padding lanes must be exactly 0.0")
        values.flags.writeable = False

    @classmethod
    def from_points(cls, points: ArrayLike) -> Dataset:
        """Copy an (n, d) array into aligned, zero-padded storage.

        Args:
            points: Array-like of shape (n, d).

        Returns:
            New Dataset.

        Raises:
            ParameterError: If the input is not two-dimensional, too small or
                holds NaN or infinite values.
        """
        array = np.asarray(points, dtype=np.float32)
        if array.ndim != 2:
            raise ParameterError(f"points must be 2-D, got shape {array.shape}")
        n, d = array.shape
        if d < 1:
            raise ParameterError(f"dataset needs d >= 1, got d={d}")
        values = aligned_zeros(n, padded_width(d))
        values[:, :d] = array
        return cls(values=values, d=d)

    @property
    def n(self) -> int:
        """Number of points."""
        return int(self.values.shape[0])

    @property
    def row_stride(self) -> int:
        """Padded row length in elements."""
        return int(self.values.shape[1])

    @property
    def rows(self) -> NDArray[np.float32]:
        """View of the unpadded (n, d) points."""
        return self.values[:, : self.d]

    def equals(self, other: Dataset) -> bool:
        """Bit-exact comparison of shape and stored values."""
        return self.d == other.d and np.array_equal(
            self.values.view(np.uint32), other.values.view(np.uint32)
        )


@dataclass(frozen=True, eq=False)
class ClusterLabels:
    """Ground-truth cluster id per point.

    Attributes:
        labels: int32 array of length n with values in [0, c).
        c: Cluster count.
    """

    labels: NDArray[np.int32]
    c: int

    def __post_init__(self) -> None:
        if self.labels.ndim != 1:
            raise ParameterError("labels must be one-dimensional")
        if self.c < 1:
            raise ParameterError(f"cluster count must be positive, got c={self.c}")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.c):
            raise ParameterError(f"labels must lie in [0, {self.c})")

    @property
    def n(self) -> int:
        """Number of labelled points."""
        return int(self.labels.shape[0])

    def counts(self) -> NDArray[np.int64]:
        """Points per cluster."""
        return np.bincount(self.labels, minlength=self.c)


def apply_permutation(dataset: Dataset, perm: Permutation) -> Dataset:
    """Move row i of the input to row sigma(i) of a new dataset.

    Args:
        dataset: Source dataset.
        perm: Permutation over the same n.

    Returns:
        New, aligned Dataset; the input is untouched.

    Raises:
        ParameterError: If sizes differ.
    """
    if perm.n != dataset.n:
        raise ParameterError(
            f"permutation size {perm.n} does not match dataset size {dataset.n}"
        )
    values = aligned_zeros(dataset.n, dataset.row_stride)
    values[perm.sigma] = dataset.values
    return Dataset(values=values, d=dataset.d)
