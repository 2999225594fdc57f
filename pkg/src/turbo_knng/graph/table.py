"""Sorted neighbor tables and their CSV form.

CSV columns are ``node,neighbor,distance``, one line per edge, sorted by
node, then distance, then neighbor id.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
import structlog
from numpy.typing import NDArray

from turbo_knng.errors import DatasetFormatError, ParameterError

logger = structlog.get_logger()

CSV_COLUMNS = ["node", "neighbor", "distance"]


def sort_rows(
    ids: NDArray[np.integer], dists: NDArray[np.floating]
) -> tuple[NDArray[np.int32], NDArray[np.floating]]:
    """Sort each row ascending by distance, ties by lower id."""
    order = np.lexsort((ids, dists), axis=-1)
    return (
        np.take_along_axis(ids, order, axis=1).astype(np.int32),
        np.take_along_axis(dists, order, axis=1),
    )


@dataclass(frozen=True, eq=False)
class NeighborTable:
    """k neighbors per node, each row sorted by (distance, id).

    Attributes:
        ids: int32 array of shape (n, k).
        dists: Distances of shape (n, k), squared units.
    """

    ids: NDArray[np.int32]
    dists: NDArray[np.floating]

    def __post_init__(self) -> None:
        if self.ids.ndim != 2 or self.ids.shape != self.dists.shape:
            raise ParameterError(
                f"ids and dists must be 2-D with equal shapes, got {self.ids.shape} and {self.dists.shape}"
            )

    @property
    def n(self) -> int:
        return int(self.ids.shape[0])

    @property
    def k(self) -> int:
        return int(self.ids.shape[1])

    def to_frame(self) -> pd.DataFrame:
        """Edge list as a DataFrame with the CSV columns."""
        return pd.DataFrame(
            {
                "node": np.repeat(np.arange(self.n), self.k),
                "neighbor": self.ids.ravel(),
                "distance": self.dists.ravel(),
            }
        )

    def to_csv(self, path: str | Path) -> None:
        """Write the edge list CSV."""
        self.to_frame().to_csv(path, index=False)
        logger.debug("graph_exported", path=str(path), n=self.n, k=self.k)

    @classmethod
    def from_csv(cls, path: str | Path) -> NeighborTable:
        """Read an edge list CSV.

        Args:
            path: File written by ``to_csv``.

        Returns:
            Table with rows re-sorted by (distance, id).

        Raises:
            DatasetFormatError: If columns are wrong, nodes are not 0..n-1,
                or nodes have differing neighbor counts.
        """
        try:
            frame = pd.read_csv(path)
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise DatasetFormatError(f"{path}: {e}") from e

        if list(frame.columns) != CSV_COLUMNS:
            raise DatasetFormatError(f"{path}: expected columns {','.join(CSV_COLUMNS)}")
        if frame.empty:
            raise DatasetFormatError(f"{path}: no edges")

        counts = frame.groupby("node").size()
        n = len(counts)
        if not np.array_equal(counts.index.to_numpy(), np.arange(n)):
            raise DatasetFormatError(f"{path}: nodes must be numbered 0..n-1")
        if counts.nunique() != 1:
            raise DatasetFormatError(f"{path}: every node needs the same neighbor count")
        k = int(counts.iloc[0])

        frame = frame.sort_values(["node", "distance", "neighbor"], kind="stable")
        ids = frame["neighbor"].to_numpy(dtype=np.int32).reshape(n, k)
        dists = frame["distance"].to_numpy(dtype=np.float64).reshape(n, k)
        return cls(ids=ids, dists=dists)
