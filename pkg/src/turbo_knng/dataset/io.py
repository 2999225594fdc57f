"""Binary dataset files and the labels sidecar.

Dataset layout (little-endian): magic ``b"KNNG"``, u32 format version,
u64 n, u64 d, then n*d float32 values row-major without padding. Labels
are a CSV sidecar with columns ``index,label``.
"""

import struct
from pathlib import Path

import numpy as np
import pandas as pd
import structlog

from turbo_knng.dataset.storage import ClusterLabels, Dataset
from turbo_knng.errors import DatasetFormatError, ParameterError

logger = structlog.get_logger()

MAGIC = b"KNNG"
FORMAT_VERSION = 1
HEADER = struct.Struct("<4sIQQ")
FLOAT_LE = np.dtype("<f4")


def save_binary(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset in the binary format.

    Args:
        dataset: Dataset to write; padding lanes are not stored.
        path: Destination file.
    """
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(MAGIC, FORMAT_VERSION, dataset.n, dataset.d))
        np.ascontiguousarray(dataset.rows, dtype=FLOAT_LE).tofile(fh)

    logger.debug("dataset_saved", path=str(path), n=dataset.n, d=dataset.d)


def load_binary(path: str | Path) -> Dataset:
    """Read a dataset written by ``save_binary``.

    Args:
        path: Source file.

    Returns:
        Dataset with padding reconstructed.

    Raises:
        DatasetFormatError: On a bad header, zero sizes, a short or overlong
            payload, or values that are NaN or infinite.
    """
    with open(path, "rb") as fh:
        head = fh.read(HEADER.size)
        if len(head) < HEADER.size:
            raise DatasetFormatError(f"{path}: truncated header")

        magic, version, n, d = HEADER.unpack(head)
        if magic != MAGIC:
            raise DatasetFormatError(f"{path}: bad magic {magic!r}")
        if version != FORMAT_VERSION:
            raise DatasetFormatError(f"{path}: unsupported format version {version}")
        if n == 0 or d == 0:
            raise DatasetFormatError(f"{path}: header declares n={n}, d={d}")

        count = n * d
        payload = np.fromfile(fh, dtype=FLOAT_LE, count=count)
        if payload.size != count:
            raise DatasetFormatError(
                f"{path}: truncated payload, expected {count} floats, found {payload.size}"
            )
        if fh.read(1):
            raise DatasetFormatError(f"{path}: trailing bytes after payload")

    try:
        dataset = Dataset.from_points(payload.reshape(n, d))
    except ParameterError as e:
        raise DatasetFormatError(f"{path}: {e}") from e

    logger.debug("dataset_loaded", path=str(path), n=n, d=d)
    return dataset


def labels_path_for(dataset_path: str | Path) -> Path:
    """Default sidecar location for a dataset's labels."""
    path = Path(dataset_path)
    return path.with_name(path.name + ".labels.csv")


def save_labels(labels: ClusterLabels, path: str | Path) -> None:
    """Write labels as ``index,label`` CSV."""
    frame = pd.DataFrame({"index": np.arange(labels.n), "label": labels.labels})
    frame.to_csv(path, index=False)


def load_labels(path: str | Path) -> ClusterLabels:
    """Read a labels sidecar.

    Args:
        path: CSV written by ``save_labels``.

    Returns:
        ClusterLabels with c = max label + 1.

    Raises:
        DatasetFormatError: If columns are missing or indices are not 0..n-1.
    """
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DatasetFormatError(f"{path}: {e}") from e

    if list(frame.columns) != ["index", "label"]:
        raise DatasetFormatError(f"{path}: expected columns index,label")
    frame = frame.sort_values("index")
    if not np.array_equal(frame["index"].to_numpy(), np.arange(len(frame))):
        raise DatasetFormatError(f"{path}: indices must cover 0..n-1 exactly once")

    values = frame["label"].to_numpy(dtype=np.int32)
    if values.size == 0 or values.min() < 0:
        raise DatasetFormatError(f"{path}: labels must be non-negative")
    return ClusterLabels(labels=values, c=int(values.max()) + 1)
