"""Pytest configuration and shared fixtures.

This module provides common test fixtures and configuration for all tests.
"""

from pathlib import Path

import numpy as np
import pytest

from turbo_knng.config import Settings
from turbo_knng.dataset import ClusterLabels, Dataset, gen_clustered, gen_gaussian
from turbo_knng.distance import EvalCounter
from turbo_knng.graph import KnnGraph


@pytest.fixture
def test_settings(monkeypatch: pytest.MonkeyPatch) -> Settings:
    """Create test settings with safe defaults.

    Args:
        monkeypatch: Pytest monkeypatch fixture.

    Returns:
        Settings instance configured for testing.
    """
    for name in (
        "KNNG_DEFAULT_K",
        "KNNG_MAX_CANDIDATES",
        "KNNG_TERMINATION_DELTA",
        "KNNG_MAX_ITERATIONS",
        "KNNG_REORDER_AFTER_ITERATION",
        "KNNG_WINDOW_SIZE",
        "KNNG_BRUTE_FORCE_MAX_N",
    ):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("KNNG_LOG_LEVEL", "WARNING")
    monkeypatch.setenv("KNNG_LOG_FORMAT", "console")

    return Settings(_env_file=None)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for test inputs.

    Returns:
        numpy Generator with a fixed seed.
    """
    return np.random.default_rng(20240611)


@pytest.fixture
def gaussian_dataset() -> Dataset:
    """Small single-component Gaussian dataset.

    Returns:
        Dataset with n=300, d=8.
    """
    return gen_gaussian(300, 8, single=True, seed=11)


@pytest.fixture
def clustered_dataset() -> tuple[Dataset, ClusterLabels]:
    """Small clustered dataset with labels.

    Returns:
        Tuple of (dataset, labels) with n=400, d=8, c=4.
    """
    return gen_clustered(400, 8, 4, seed=5)


@pytest.fixture
def collinear_dataset() -> Dataset:
    """Three points on a line at x=0, 1, 3.

    Returns:
        Dataset with n=3, d=1.
    """
    return Dataset.from_points([[0.0], [1.0], [3.0]])


@pytest.fixture
def random_graph(gaussian_dataset: Dataset) -> KnnGraph:
    """Randomly initialized graph over the Gaussian dataset.

    Args:
        gaussian_dataset: Gaussian dataset fixture.

    Returns:
        KnnGraph with k=10.
    """
    return KnnGraph.init_random(gaussian_dataset, 10, seed=3, counter=EvalCounter())


@pytest.fixture
def data_dir(tmp_path: Path) -> Path:
    """Directory for files written by a test.

    Args:
        tmp_path: Pytest temporary directory.

    Returns:
        Existing directory path.
    """
    path = tmp_path / "data"
    path.mkdir()
    return path


# Markers for test categorization
def pytest_configure(config: pytest.Config) -> None:
    """Configure custom pytest markers.

    Args:
        config: Pytest configuration object.
    """
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line("markers", "unit: marks tests as unit tests")
    config.addinivalue_line(
        "markers", "benchmark: marks wall-clock comparisons (select with '-m benchmark')"
    )
