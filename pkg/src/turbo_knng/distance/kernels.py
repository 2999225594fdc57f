"""Squared Euclidean distance kernels.

Every kernel accumulates eight float32 lane sums per pair, one lane per
element of an eight-wide chunk, and reduces the lanes with the same
pairwise tree. The scalar and the 5x5 blocked paths therefore perform the
same float32 operations in the same order and agree bit for bit. Rows
must be padded to a multiple of eight with zeros (see ``Dataset``), so the
kernels run over the padded width instead of d.
"""

from collections.abc import Callable

import numba
import numpy as np
from numpy.typing import ArrayLike, NDArray

from turbo_knng.dataset.storage import LANES, aligned_zeros, padded_width
from turbo_knng.distance.counter import EvalCounter
from turbo_knng.errors import ParameterError


TILE = 5

_lane_locals = {f"l{i}": numba.float32 for i in range(LANES)}
_lane_locals["t"] = numba.float32


@numba.njit(cache=True, boundscheck=False, locals=_lane_locals)
def l2_sq_rows(a: NDArray[np.float32], b: NDArray[np.float32], width: int) -> float:
    """Squared distance between two padded rows, scalar path."""
    l0 = l1 = l2 = l3 = l4 = l5 = l6 = l7 = 0.0
    for base in range(0, width, LANES):
        t = a[base] - b[base]
        l0 += t * t
        t = a[base + 1] - b[base + 1]
        l1 += t * t
        t = a[base + 2] - b[base + 2]
        l2 += t * t
        t = a[base + 3] - b[base + 3]
        l3 += t * t
        t = a[base + 4] - b[base + 4]
        l4 += t * t
        t = a[base + 5] - b[base + 5]
        l5 += t * t
        t = a[base + 6] - b[base + 6]
        l6 += t * t
        t = a[base + 7] - b[base + 7]
        l7 += t * t
    return ((l0 + l1) + (l2 + l3)) + ((l4 + l5) + (l6 + l7))


@numba.njit(cache=True, boundscheck=False)
def _reduce_lanes(lanes: NDArray[np.float32]) -> float:
    """Sum eight lane partials with the fixed pairwise tree."""
    return ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) + (
        (lanes[4] + lanes[5]) + (lanes[6] + lanes[7])
    )


@numba.njit(cache=True, boundscheck=False, locals={"t": numba.float32})
def tile_distances(
    data: NDArray[np.float32],
    ids_a: NDArray[np.int32],
    na: int,
    ids_b: NDArray[np.int32],
    nb: int,
    width: int,
    buf_a: NDArray[np.float32],
    buf_b: NDArray[np.float32],
    acc: NDArray[np.float32],
    tile: NDArray[np.float32],
) -> None:
    """Fill tile[:na, :nb] with distances between rows ids_a[:na] and ids_b[:nb].

    Each row's chunk is copied into the buffers once and then feeds every
    pair of the tile.
    """
    for i in range(na):
        for j in range(nb):
            for lane in range(LANES):
                acc[i, j, lane] = 0.0

    for base in range(0, width, LANES):
        for i in range(na):
            row = data[ids_a[i]]
            for lane in range(LANES):
                buf_a[i, lane] = row[base + lane]
        for j in range(nb):
            row = data[ids_b[j]]
            for lane in range(LANES):
                buf_b[j, lane] = row[base + lane]
        for i in range(na):
            for j in range(nb):
                for lane in range(LANES):
                    t = buf_a[i, lane] - buf_b[j, lane]
                    acc[i, j, lane] += t * t

    for i in range(na):
        for j in range(nb):
            tile[i, j] = _reduce_lanes(acc[i, j])


@numba.njit(cache=True, boundscheck=False, locals={"t": numba.float32})
def triangle_distances(
    data: NDArray[np.float32],
    ids: NDArray[np.int32],
    width: int,
    buf: NDArray[np.float32],
    acc: NDArray[np.float32],
    tile: NDArray[np.float32],
) -> None:
    """Fill tile[i, j] for i < j < TILE, the diagonal block of a mutual join."""
    for i in range(TILE):
        for j in range(i + 1, TILE):
            for lane in range(LANES):
                acc[i, j, lane] = 0.0

    for base in range(0, width, LANES):
        for i in range(TILE):
            row = data[ids[i]]
            for lane in range(LANES):
                buf[i, lane] = row[base + lane]
        for i in range(TILE):
            for j in range(i + 1, TILE):
                for lane in range(LANES):
                    t = buf[i, lane] - buf[j, lane]
                    acc[i, j, lane] += t * t

    for i in range(TILE):
        for j in range(i + 1, TILE):
            tile[i, j] = _reduce_lanes(acc[i, j])


@numba.njit(cache=True, boundscheck=False)
def mutual_distances(
    data: NDArray[np.float32],
    ids: NDArray[np.int32],
    m: int,
    width: int,
    out: NDArray[np.float32],
    counter_cell: NDArray[np.int64],
) -> None:
    """Fill out[i, j] for every i < j < m over rows ids[:m], blocked path.

    Full 5-row groups are joined with triangles on the diagonal and 5x5
    tiles off it. Rows beyond the last full group use the scalar kernel.
    """
    buf_a = np.empty((TILE, LANES), dtype=np.float32)
    buf_b = np.empty((TILE, LANES), dtype=np.float32)
    acc = np.empty((TILE, TILE, LANES), dtype=np.float32)
    tile = np.empty((TILE, TILE), dtype=np.float32)

    full = (m // TILE) * TILE
    for bi in range(0, full, TILE):
        triangle_distances(data, ids[bi : bi + TILE], width, buf_a, acc, tile)
        for i in range(TILE):
            for j in range(i + 1, TILE):
                out[bi + i, bi + j] = tile[i, j]
        for bj in range(bi + TILE, full, TILE):
            tile_distances(
                data, ids[bi : bi + TILE], TILE, ids[bj : bj + TILE], TILE,
                width, buf_a, buf_b, acc, tile,
            )
            for i in range(TILE):
                for j in range(TILE):
                    out[bi + i, bj + j] = tile[i, j]

    for j in range(full, m):
        row_j = data[ids[j]]
        for i in range(j):
            out[i, j] = l2_sq_rows(data[ids[i]], row_j, width)

    counter_cell[0] += m * (m - 1) // 2


@numba.njit(cache=True, boundscheck=False)
def cross_distances(
    data: NDArray[np.float32],
    ids_a: NDArray[np.int32],
    ma: int,
    ids_b: NDArray[np.int32],
    mb: int,
    width: int,
    out: NDArray[np.float32],
    counter_cell: NDArray[np.int64],
) -> None:
    """Fill out[i, j] for i < ma, j < mb between two row sets, blocked path."""
    buf_a = np.empty((TILE, LANES), dtype=np.float32)
    buf_b = np.empty((TILE, LANES), dtype=np.float32)
    acc = np.empty((TILE, TILE, LANES), dtype=np.float32)
    tile = np.empty((TILE, TILE), dtype=np.float32)

    full_a = (ma // TILE) * TILE
    full_b = (mb // TILE) * TILE
    for bi in range(0, full_a, TILE):
        for bj in range(0, full_b, TILE):
            tile_distances(
                data, ids_a[bi : bi + TILE], TILE, ids_b[bj : bj + TILE], TILE,
                width, buf_a, buf_b, acc, tile,
            )
            for i in range(TILE):
                for j in range(TILE):
                    out[bi + i, bj + j] = tile[i, j]

    for i in range(ma):
        row_i = data[ids_a[i]]
        start = full_b if i < full_a else 0
        for j in range(start, mb):
            out[i, j] = l2_sq_rows(row_i, data[ids_b[j]], width)

    counter_cell[0] += ma * mb


@numba.njit(cache=True, boundscheck=False)
def mutual_distances_scalar(
    data: NDArray[np.float32],
    ids: NDArray[np.int32],
    m: int,
    width: int,
    out: NDArray[np.float32],
    counter_cell: NDArray[np.int64],
) -> None:
    """Same contract as ``mutual_distances`` using only the scalar kernel."""
    for i in range(m):
        row_i = data[ids[i]]
        for j in range(i + 1, m):
            out[i, j] = l2_sq_rows(row_i, data[ids[j]], width)
    counter_cell[0] += m * (m - 1) // 2


@numba.njit(cache=True, boundscheck=False)
def cross_distances_scalar(
    data: NDArray[np.float32],
    ids_a: NDArray[np.int32],
    ma: int,
    ids_b: NDArray[np.int32],
    mb: int,
    width: int,
    out: NDArray[np.float32],
    counter_cell: NDArray[np.int64],
) -> None:
    """Same contract as ``cross_distances`` using only the scalar kernel."""
    for i in range(ma):
        row_i = data[ids_a[i]]
        for j in range(mb):
            out[i, j] = l2_sq_rows(row_i, data[ids_b[j]], width)
    counter_cell[0] += ma * mb


def _padded_rows(rows: ArrayLike, d: int) -> NDArray[np.float32]:
    array = np.asarray(rows, dtype=np.float32)
    if array.ndim == 1:
        array = array[np.newaxis, :]
    if array.ndim != 2 or array.shape[1] < d:
        raise ParameterError(f"rows must be 2-D with at least d={d} columns, got {array.shape}")
    padded = aligned_zeros(array.shape[0], padded_width(d))
    padded[:, :d] = array[:, :d]
    return padded


def _cell(counter: EvalCounter | None) -> NDArray[np.int64]:
    return counter.cell if counter is not None else np.zeros(1, dtype=np.int64)


def l2_sq(a: ArrayLike, b: ArrayLike, d: int, counter: EvalCounter | None = None) -> float:
    """Squared Euclidean distance over the first d components.

    Args:
        a: First point.
        b: Second point.
        d: Number of components to compare.
        counter: Optional counter, incremented by one.

    Returns:
        Sum of squared component differences, computed in float32.
    """
    row_a = _padded_rows(a, d)[0]
    row_b = _padded_rows(b, d)[0]
    value = float(l2_sq_rows(row_a, row_b, row_a.shape[0]))
    if counter is not None:
        counter.add(1)
    return value


def block_l2_sq(
    rows_a: ArrayLike,
    rows_b: ArrayLike,
    d: int,
    counter: EvalCounter | None = None,
) -> NDArray[np.float32]:
    """Distance tile between up to five rows on each side.

    Args:
        rows_a: Array of shape (na, >= d), 1 <= na <= 5.
        rows_b: Array of shape (nb, >= d), 1 <= nb <= 5.
        d: Number of components to compare.
        counter: Optional counter, incremented by na * nb.

    Returns:
        float32 matrix of shape (na, nb).

    Raises:
        ParameterError: If either side is empty or has more than five rows.
    """
    a = _padded_rows(rows_a, d)
    b = _padded_rows(rows_b, d)
    na, nb = a.shape[0], b.shape[0]
    if not (1 <= na <= TILE and 1 <= nb <= TILE):
        raise ParameterError(f"tile sides must be between 1 and {TILE} rows, got {na}x{nb}")

    data = np.vstack([a, b])
    ids = np.arange(na + nb, dtype=np.int32)
    tile = np.zeros((TILE, TILE), dtype=np.float32)
    tile_distances(
        data, ids[:na], na, ids[na:], nb, data.shape[1],
        np.empty((TILE, LANES), dtype=np.float32),
        np.empty((TILE, LANES), dtype=np.float32),
        np.empty((TILE, TILE, LANES), dtype=np.float32),
        tile,
    )
    if counter is not None:
        counter.add(na * nb)
    return tile[:na, :nb].copy()


def mutual_block_distances(
    rows: ArrayLike,
    d: int,
    consumer: Callable[[int, int, float], None],
    counter: EvalCounter | None = None,
) -> None:
    """Evaluate every unordered pair of rows and hand each to ``consumer``.

    Args:
        rows: Array of shape (m, >= d).
        d: Number of components to compare.
        consumer: Called once per pair as consumer(i, j, distance), i < j,
            in row-major order.
        counter: Optional counter, incremented by m(m-1)/2.
    """
    array = np.asarray(rows, dtype=np.float32)
    if array.ndim != 2 or array.shape[0] < 2:
        return

    data = _padded_rows(array, d)
    m = data.shape[0]
    out = np.zeros((m, m), dtype=np.float32)
    mutual_distances(data, np.arange(m, dtype=np.int32), m, data.shape[1], out, _cell(counter))
    for i in range(m):
        for j in range(i + 1, m):
            consumer(i, j, float(out[i, j]))
