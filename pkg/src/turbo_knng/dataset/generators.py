"""Synthetic dataset generators.

Both generators are deterministic for a fixed seed. The Gaussian generator
follows the benchmark description (covariance 2*I_d, one or d components);
the clustered generator places well-separated unit-covariance clusters so
that every point's nearest neighbors share its cluster.
"""

import numpy as np
import structlog
from numpy.typing import NDArray

from turbo_knng.dataset.storage import ClusterLabels, Dataset
from turbo_knng.errors import ParameterError

logger = structlog.get_logger()

GAUSSIAN_VARIANCE = 2.0
CLUSTER_SCALE = 10.0


def gen_gaussian(n: int, d: int, single: bool, seed: int) -> Dataset:
    """Draw the synthetic Gaussian dataset.

    Args:
        n: Number of points (>= 2).
        d: Dimensionality (>= 1).
        single: If True, every point comes from N(0, 2*I_d). Otherwise point i
            comes from the component centred on the canonical basis vector
            e_(i mod d), with the same covariance.
        seed: RNG seed.

    Returns:
        Generated Dataset.

    Raises:
        ParameterError: If n < 2 or d < 1.
    """
    if n < 2 or d < 1:
        raise ParameterError(f"gaussian dataset needs n >= 2 and d >= 1, got n={n}, d={d}")

    rng = np.random.default_rng(seed)
    points = rng.normal(0.0, np.sqrt(GAUSSIAN_VARIANCE), size=(n, d))
    if not single:
        points[np.arange(n), np.arange(n) % d] += 1.0

    logger.debug("dataset_generated", kind="gaussian", n=n, d=d, single=single)
    return Dataset.from_points(points)


def cluster_means(
    d: int, c: int, rng: np.random.Generator | None = None
) -> NDArray[np.float64]:
    """Cluster centres for ``c`` clusters in ``d`` dimensions.

    Up to 2d clusters sit at +/- 10*sqrt(d) along the canonical axes:
    cluster j on axis j mod d, on the positive side for j < d and the
    negative side for d <= j < 2d. Beyond 2d clusters the centres are drawn
    uniformly from a cube whose side grows as c^(1/d), keeping the expected
    spacing between neighboring centres near the axis layout's.

    Args:
        d: Dimensionality.
        c: Cluster count.
        rng: Generator for random centres; a fixed seed is used if omitted.

    Returns:
        Array of shape (c, d).
    """
    scale = CLUSTER_SCALE * np.sqrt(d)
    if c > 2 * d:
        rng = rng if rng is not None else np.random.default_rng(0)
        return rng.uniform(-scale, scale, size=(c, d)) * c ** (1.0 / d)

    means = np.zeros((c, d))
    for j in range(c):
        means[j, j % d] = scale if j < d else -scale
    return means


def gen_clustered(n: int, d: int, c: int, seed: int) -> tuple[Dataset, ClusterLabels]:
    """Draw the synthetic clustered dataset.

    Points are split evenly among c clusters (the remainder goes to the last
    one), drawn from N(mean_j, I_d), then shuffled so memory order reveals
    nothing about the clusters.

    Args:
        n: Number of points (>= 2c).
        d: Dimensionality.
        c: Cluster count (>= 2); more than 2d clusters get random centres.
        seed: RNG seed.

    Returns:
        Tuple of (dataset, labels) in the same shuffled order.

    Raises:
        ParameterError: If the size constraints are violated.
    """
    if c < 2:
        raise ParameterError(f"clustered dataset needs c >= 2, got c={c}")
    if n < 2 * c:
        raise ParameterError(f"clustered dataset needs n >= 2c, got n={n}, c={c}")
    if d < 1:
        raise ParameterError(f"clustered dataset needs d >= 1, got d={d}")

    rng = np.random.default_rng(seed)
    means = cluster_means(d, c, rng)
    sizes = np.full(c, n // c)
    sizes[-1] += n - c * (n // c)
    labels = np.repeat(np.arange(c, dtype=np.int32), sizes)
    points = means[labels] + rng.standard_normal((n, d))

    order = rng.permutation(n)
    logger.debug("dataset_generated", kind="clustered", n=n, d=d, c=c, random_means=c > 2 * d)
    return Dataset.from_points(points[order]), ClusterLabels(labels=labels[order], c=c)
