"""Tests for window fractions and the cluster miss bound."""

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from turbo_knng.dataset import ClusterLabels, gen_clustered
from turbo_knng.distance import EvalCounter
from turbo_knng.errors import ParameterError
from turbo_knng.graph import KnnGraph
from turbo_knng.reorder import (
    Permutation,
    binomial_sigma,
    cluster_miss_bound,
    observed_miss_fraction,
    window_cluster_fraction,
)


def sorted_labels(n: int, c: int) -> ClusterLabels:
    return ClusterLabels(labels=np.repeat(np.arange(c, dtype=np.int32), n // c), c=c)


@pytest.mark.unit
class TestWindowClusterFraction:
    """Test suite for window_cluster_fraction()."""

    def test_sorted_input_aligned_windows(self) -> None:
        """Test aligned windows over cluster-sorted data are pure."""
        labels = sorted_labels(800, 8)

        curves = window_cluster_fraction(labels, Permutation.identity(800), window=100)

        for row, start in zip(curves.fractions, curves.starts, strict=True):
            if start % 100 == 0:
                assert row.max() == 1.0
                assert row.argmax() == start // 100

    def test_window_starts(self) -> None:
        """Test windows advance by a quarter window and the last one ends at n."""
        labels = sorted_labels(1050, 3)

        curves = window_cluster_fraction(labels, Permutation.identity(1050), window=400)

        assert curves.starts.tolist() == [0, 100, 200, 300, 400, 500, 600, 650]
        assert curves.window == 400

    def test_rows_sum_to_one(self, clustered_dataset: tuple, rng: np.random.Generator) -> None:
        """Test each window's fractions sum to one.

        Args:
            clustered_dataset: Clustered dataset fixture.
            rng: Seeded generator fixture.
        """
        _, labels = clustered_dataset
        perm = Permutation.from_sigma(rng.permutation(labels.n))

        curves = window_cluster_fraction(labels, perm, window=100)

        assert np.allclose(curves.fractions.sum(axis=1), 1.0)

    def test_uses_permuted_occupant(self) -> None:
        """Test position q is attributed to the node placed there."""
        labels = ClusterLabels(labels=np.array([0, 0, 1, 1], dtype=np.int32), c=2)
        perm = Permutation.from_sigma([0, 3, 1, 2])

        curves = window_cluster_fraction(labels, perm, window=2)

        assert curves.starts.tolist() == [0, 1, 2]
        assert curves.fractions.tolist() == [[0.5, 0.5], [0.0, 1.0], [0.5, 0.5]]

    def test_random_permutation_uniform(self, rng: np.random.Generator) -> None:
        """Test a uniform random order gives about 1/c per cluster.

        Args:
            rng: Seeded generator fixture.
        """
        labels = sorted_labels(16000, 8)
        perm = Permutation.from_sigma(rng.permutation(16000))

        curves = window_cluster_fraction(labels, perm)

        tolerance = 5 * binomial_sigma(1 / 8, 2000)
        assert np.all(np.abs(curves.fractions - 1 / 8) <= tolerance)

    def test_csv(self, tmp_path: Path) -> None:
        """Test the long-format CSV.

        Args:
            tmp_path: Pytest temporary directory.
        """
        labels = sorted_labels(40, 4)
        path = tmp_path / "windows.csv"

        window_cluster_fraction(labels, Permutation.identity(40), window=20).to_csv(path)
        frame = pd.read_csv(path)

        assert list(frame.columns) == ["window_start", "cluster_id", "fraction"]
        assert len(frame) == 5 * 4
        assert frame.groupby("window_start")["fraction"].sum().round(9).eq(1.0).all()

    def test_window_larger_than_n(self) -> None:
        """Test a window longer than the data is refused."""
        with pytest.raises(ParameterError):
            window_cluster_fraction(sorted_labels(100, 4), Permutation.identity(100))

    def test_size_mismatch(self) -> None:
        """Test labels and permutation must agree in size."""
        with pytest.raises(ParameterError):
            window_cluster_fraction(sorted_labels(100, 4), Permutation.identity(99), window=10)


@pytest.mark.unit
class TestMissBound:
    """Test suite for cluster_miss_bound() and its empirical counterpart."""

    def test_values(self) -> None:
        """Test direct substitution."""
        assert cluster_miss_bound(2, 1) == 0.5
        assert cluster_miss_bound(8, 20) == pytest.approx(0.0692, abs=1e-4)

    def test_decreasing_in_k(self) -> None:
        """Test the bound shrinks as k grows."""
        values = [cluster_miss_bound(8, k) for k in range(1, 60)]

        assert all(b < a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("c,k", [(1, 5), (0, 5), (4, 0)])
    def test_invalid(self, c: int, k: int) -> None:
        """Test out-of-range arguments are refused.

        Args:
            c: Cluster count.
            k: Neighbor count.
        """
        with pytest.raises(ParameterError):
            cluster_miss_bound(c, k)

    def test_binomial_sigma(self) -> None:
        """Test the proportion standard deviation."""
        assert binomial_sigma(0.5, 100) == pytest.approx(0.05)
        with pytest.raises(ParameterError):
            binomial_sigma(0.5, 0)

    def test_observed_fraction(self) -> None:
        """Test a hand-built graph's miss fraction."""
        labels = ClusterLabels(labels=np.array([0, 0, 1, 1], dtype=np.int32), c=2)
        graph = KnnGraph(
            ids=np.array([[2, 3], [0, 2], [0, 1], [2, 0]], dtype=np.int32),
            dists=np.ones((4, 2), dtype=np.float32),
            flags=np.zeros((4, 2), dtype=np.uint8),
            reverse_degree=np.zeros(4, dtype=np.int32),
        )

        assert observed_miss_fraction(graph, labels) == 0.5

    @pytest.mark.parametrize("c,k", [(4, 5), (8, 10), (2, 3)])
    def test_random_graph_within_bound(self, c: int, k: int) -> None:
        """Test random initializations miss their cluster no more often than the bound allows.

        Args:
            c: Cluster count.
            k: Neighbors per node.
        """
        n = 4000
        ds, labels = gen_clustered(n, 8, c, seed=c * 100 + k)
        bound = cluster_miss_bound(c, k)

        for seed in range(3):
            graph = KnnGraph.init_random(ds, k, seed=seed, counter=EvalCounter())
            observed = observed_miss_fraction(graph, labels)
            assert observed <= bound + 3 * binomial_sigma(bound, n)
