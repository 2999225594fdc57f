"""End-to-end tests for the turbo-knng command line."""

import json
from pathlib import Path

import pandas as pd
import pytest
import structlog

from turbo_knng.cli import run_cli, setup_logging
from turbo_knng.config import Settings
from turbo_knng.dataset import labels_path_for, load_binary, load_labels
from turbo_knng.graph import NeighborTable


@pytest.fixture
def cli(test_settings: Settings, capsys: pytest.CaptureFixture[str]):
    """Run the CLI and capture its streams.

    Args:
        test_settings: Test settings fixture.
        capsys: Pytest capture fixture.

    Returns:
        Callable returning (exit code, stdout, stderr).
    """

    def invoke(*argv: str) -> tuple[int, str, str]:
        code = run_cli(list(argv), settings=test_settings)
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


@pytest.fixture
def gaussian_file(cli, data_dir: Path) -> Path:
    """A small Gaussian dataset written by ``generate``.

    Args:
        cli: CLI fixture.
        data_dir: Data directory fixture.

    Returns:
        Path of the dataset file.
    """
    data_dir.mkdir(exist_ok=True)
    path = data_dir / "gauss.bin"
    code, _, _ = cli(
        "generate", "--kind", "gaussian-single", "--n", "200", "--d", "8", "--seed", "4", "--out", str(path)
    )
    assert code == 0
    return path


@pytest.mark.unit
class TestGenerate:
    """Tests for ``generate``."""

    def test_gaussian(self, cli, tmp_path: Path) -> None:
        """Test a Gaussian dataset is written and summarized.

        Args:
            cli: CLI fixture.
            tmp_path: Pytest temporary directory.
        """
        out = tmp_path / "g.bin"

        code, stdout, stderr = cli(
            "generate", "--kind", "gaussian", "--n", "50", "--d", "3", "--seed", "1", "--out", str(out)
        )

        assert code == 0
        assert stderr == ""
        assert stdout == f"n=50 d=3 out={out}\n"
        ds = load_binary(out)
        assert (ds.n, ds.d) == (50, 3)

    def test_clustered_writes_labels(self, cli, tmp_path: Path) -> None:
        """Test clustered data comes with a labels sidecar.

        Args:
            cli: CLI fixture.
            tmp_path: Pytest temporary directory.
        """
        out = tmp_path / "c.bin"

        code, stdout, _ = cli(
            "generate", "--kind", "clustered", "--n", "64", "--d", "8", "--c", "8", "--seed", "2",
            "--out", str(out),
        )

        assert code == 0
        assert "c=8" in stdout
        labels = load_labels(labels_path_for(out))
        assert labels.n == 64
        assert sorted(set(labels.labels.tolist())) == list(range(8))

    def test_repeatable(self, cli, tmp_path: Path) -> None:
        """Test equal seeds give byte-identical files.

        Args:
            cli: CLI fixture.
            tmp_path: Pytest temporary directory.
        """
        a, b = tmp_path / "a.bin", tmp_path / "b.bin"
        for out in (a, b):
            cli(
                "generate", "--kind", "gaussian", "--n", "100", "--d", "5", "--seed", "9", "--out", str(out)
            )

        assert a.read_bytes() == b.read_bytes()

    def test_invalid_dimension(self, cli, tmp_path: Path) -> None:
        """Test d=0 fails with a single diagnostic line.

        Args:
            cli: CLI fixture.
            tmp_path: Pytest temporary directory.
        """
        out = tmp_path / "bad.bin"

        code, stdout, stderr = cli(
            "generate", "--kind", "gaussian", "--n", "10", "--d", "0", "--seed", "1", "--out", str(out)
        )

        assert code == 1
        assert stdout == ""
        assert len(stderr.strip().splitlines()) == 1
        assert "command_failed" in stderr
        assert not out.exists()

    def test_more_clusters_than_axes(self, cli, tmp_path: Path) -> None:
        """Test c > 2d still writes a dataset and its labels.

        Args:
            cli: CLI fixture.
            tmp_path: Pytest temporary directory.
        """
        out = tmp_path / "c.bin"

        code, _, stderr = cli(
            "generate", "--kind", "clustered", "--n", "100", "--d", "2", "--c", "5", "--seed", "1",
            "--out", str(out),
        )

        assert code == 0
        assert stderr == ""
        assert load_binary(out).n == 100
        assert load_labels(labels_path_for(out)).c == 5


@pytest.mark.unit
class TestBuild:
    """Tests for ``build``."""

    def test_writes_graph_and_metrics(self, cli, gaussian_file: Path, tmp_path: Path) -> None:
        """Test the graph and metrics CSVs and the summary line.

        Args:
            cli: CLI fixture.
            gaussian_file: Dataset fixture.
            tmp_path: Pytest temporary directory.
        """
        graph_out, metrics_out = tmp_path / "g.csv", tmp_path / "m.csv"

        code, stdout, stderr = cli(
            "build", "--dataset", str(gaussian_file), "--k", "5", "--max-candidates", "50", "--seed", "1",
            "--graph-out", str(graph_out), "--metrics-out", str(metrics_out), "--recall",
        )

        assert code == 0
        assert stderr == ""
        line = stdout.strip()
        assert line.startswith("n=200 d=8 iters=")
        assert "dist_evals=" in line
        assert float(line.rsplit("recall=", 1)[1]) >= 0.95

        table = NeighborTable.from_csv(graph_out)
        assert (table.n, table.k) == (200, 5)
        metrics = pd.read_csv(metrics_out)
        assert metrics["iteration"].iloc[0] == "0"
        assert metrics["iteration"].iloc[-1] == "total"

    @pytest.mark.parametrize("strategy", ["naive", "fused", "turbo"])
    def test_strategies_and_reorder(self, cli, gaussian_file: Path, strategy: str) -> None:
        """Test each strategy runs with reordering enabled.

        Args:
            cli: CLI fixture.
            gaussian_file: Dataset fixture.
            strategy: Strategy name.
        """
        code, stdout, _ = cli(
            "build", "--dataset", str(gaussian_file), "--k", "5", "--max-candidates", "10",
            "--strategy", strategy, "--kernel", "scalar", "--reorder", "--seed", "3",
        )

        assert code == 0
        assert stdout.startswith("n=200 d=8 ")

    def test_missing_dataset(self, cli, tmp_path: Path) -> None:
        """Test a missing input fails with exit code 1.

        Args:
            cli: CLI fixture.
            tmp_path: Pytest temporary directory.
        """
        code, stdout, stderr = cli("build", "--dataset", str(tmp_path / "none.bin"), "--seed", "1")

        assert code == 1
        assert stdout == ""
        assert "dataset not found" in stderr
        assert len(stderr.strip().splitlines()) == 1

    def test_k_too_large(self, cli, gaussian_file: Path) -> None:
        """Test k >= n is reported as a failure.

        Args:
            cli: CLI fixture.
            gaussian_file: Dataset fixture.
        """
        code, _, stderr = cli(
            "build", "--dataset", str(gaussian_file), "--k", "200", "--max-candidates", "300", "--seed", "1"
        )

        assert code == 1
        assert "k" in stderr

    def test_reorder_after_without_reorder(self, cli, gaussian_file: Path) -> None:
        """Test conflicting flags are rejected before any work.

        Args:
            cli: CLI fixture.
            gaussian_file: Dataset fixture.
        """
        code, _, stderr = cli(
            "build", "--dataset", str(gaussian_file), "--seed", "1", "--reorder-after", "2"
        )

        assert code == 1
        assert "requires --reorder" in stderr


@pytest.mark.unit
class TestRecallCommand:
    """Tests for ``recall``."""

    @pytest.fixture
    def graph_csv(self, cli, gaussian_file: Path, tmp_path: Path) -> Path:
        """Graph CSV built from the Gaussian dataset.

        Args:
            cli: CLI fixture.
            gaussian_file: Dataset fixture.
            tmp_path: Pytest temporary directory.

        Returns:
            Path of the graph CSV.
        """
        path = tmp_path / "graph.csv"
        code, _, _ = cli(
            "build", "--dataset", str(gaussian_file), "--k", "5", "--max-candidates", "50", "--seed", "2",
            "--out", str(path),
        )
        assert code == 0
        return path

    def test_against_itself(self, cli, graph_csv: Path) -> None:
        """Test a graph compared to itself has recall 1.

        Args:
            cli: CLI fixture.
            graph_csv: Graph CSV fixture.
        """
        code, stdout, _ = cli("recall", "--graph", str(graph_csv), "--exact", str(graph_csv))

        assert code == 0
        assert stdout == "recall=1.000000\n"

    def test_against_dataset(self, cli, graph_csv: Path, gaussian_file: Path) -> None:
        """Test the oracle path prints a high recall.

        Args:
            cli: CLI fixture.
            graph_csv: Graph CSV fixture.
            gaussian_file: Dataset fixture.
        """
        code, stdout, _ = cli(
            "recall", "--graph", str(graph_csv), "--dataset", str(gaussian_file), "--k", "5"
        )

        assert code == 0
        assert stdout.startswith("recall=")
        assert float(stdout.strip().split("=")[1]) >= 0.95

    def test_k_mismatch(self, cli, graph_csv: Path, gaussian_file: Path) -> None:
        """Test a --k that disagrees with the graph fails.

        Args:
            cli: CLI fixture.
            graph_csv: Graph CSV fixture.
            gaussian_file: Dataset fixture.
        """
        code, stdout, stderr = cli(
            "recall", "--graph", str(graph_csv), "--dataset", str(gaussian_file), "--k", "7"
        )

        assert code == 1
        assert stdout == ""
        assert "does not match" in stderr

    def test_no_reference(self, cli, graph_csv: Path) -> None:
        """Test a reference is required.

        Args:
            cli: CLI fixture.
            graph_csv: Graph CSV fixture.
        """
        code, _, stderr = cli("recall", "--graph", str(graph_csv))

        assert code == 1
        assert "--exact" in stderr


@pytest.mark.unit
class TestReorderEval:
    """Tests for ``reorder-eval``."""

    def test_writes_window_fractions(self, cli, tmp_path: Path) -> None:
        """Test the window CSV and the printed summary.

        Args:
            cli: CLI fixture.
            tmp_path: Pytest temporary directory.
        """
        data = tmp_path / "c.bin"
        out = tmp_path / "windows.csv"
        cli(
            "generate", "--kind", "clustered", "--n", "400", "--d", "8", "--c", "4", "--seed", "2",
            "--out", str(data),
        )

        code, stdout, stderr = cli(
            "reorder-eval", "--dataset", str(data), "--k", "10", "--seed", "2", "--window", "50",
            "--out", str(out),
        )

        assert code == 0
        assert stderr == ""
        assert stdout.startswith("windows=")
        frame = pd.read_csv(out)
        assert list(frame.columns) == ["window_start", "cluster_id", "fraction"]
        assert set(frame["cluster_id"]) == {0, 1, 2, 3}

        fields = dict(item.split("=") for item in stdout.split())
        peaks = frame.groupby("window_start")["fraction"].max()
        head = peaks[peaks.index < 100]
        assert float(fields["head_max_fraction"]) == pytest.approx(head.mean(), abs=1e-4)
        assert float(fields["tail_max_fraction"]) == pytest.approx(peaks.iloc[-1], abs=1e-4)
        assert int(fields["windows"]) == len(peaks)

    def test_missing_labels(self, cli, gaussian_file: Path, tmp_path: Path) -> None:
        """Test unlabelled data cannot be evaluated.

        Args:
            cli: CLI fixture.
            gaussian_file: Dataset fixture.
            tmp_path: Pytest temporary directory.
        """
        code, _, stderr = cli(
            "reorder-eval", "--dataset", str(gaussian_file), "--seed", "1", "--window", "50",
            "--out", str(tmp_path / "w.csv"),
        )

        assert code == 1
        assert "labels not found" in stderr


@pytest.mark.unit
class TestSweep:
    """Tests for ``sweep``."""

    def test_over_n(self, cli, tmp_path: Path) -> None:
        """Test a three-point size sweep prints the scaling exponent.

        Args:
            cli: CLI fixture.
            tmp_path: Pytest temporary directory.
        """
        out = tmp_path / "sweep.csv"

        code, stdout, _ = cli(
            "sweep", "--over", "n", "--values", "200", "300", "400", "--d", "4",
            "--k", "5", "--max-candidates", "10", "--seed", "1", "--out", str(out),
        )

        assert code == 0
        lines = stdout.strip().splitlines()
        assert len(lines) == 4
        assert lines[0].startswith("n=200 d=4 ")
        assert lines[-1].startswith("scaling_exponent=")
        frame = pd.read_csv(out)
        assert list(frame.columns[:3]) == ["n", "d", "iteration"]
        assert sorted(frame["n"].unique().tolist()) == [200, 300, 400]

    def test_over_d(self, cli, tmp_path: Path) -> None:
        """Test a dimension sweep prints no exponent.

        Args:
            cli: CLI fixture.
            tmp_path: Pytest temporary directory.
        """
        code, stdout, _ = cli(
            "sweep", "--over", "d", "--values", "2", "4", "--n", "150",
            "--k", "5", "--max-candidates", "10", "--seed", "1", "--out", str(tmp_path / "s.csv"),
        )

        assert code == 0
        assert "scaling_exponent" not in stdout
        assert len(stdout.strip().splitlines()) == 2

    def test_fixed_axis_conflict(self, cli, tmp_path: Path) -> None:
        """Test fixing the swept axis is rejected.

        Args:
            cli: CLI fixture.
            tmp_path: Pytest temporary directory.
        """
        code, _, stderr = cli(
            "sweep", "--over", "d", "--values", "2", "4", "--d", "8", "--seed", "1",
            "--out", str(tmp_path / "s.csv"),
        )

        assert code == 1
        assert "conflicts" in stderr


@pytest.mark.unit
class TestSetupLogging:
    """Tests for setup_logging()."""

    def test_json_format(self, test_settings: Settings, capsys: pytest.CaptureFixture[str]) -> None:
        """Test JSON log lines go to stderr.

        Args:
            test_settings: Test settings fixture.
            capsys: Pytest capture fixture.
        """
        setup_logging(test_settings.model_copy(update={"log_format": "json"}))
        structlog.get_logger().warning("probe_event", value=3)

        captured = capsys.readouterr()
        record = json.loads(captured.err.strip())
        assert captured.out == ""
        assert record["event"] == "probe_event"
        assert record["value"] == 3
        assert record["level"] == "warning"

    def test_level_filters(self, test_settings: Settings, capsys: pytest.CaptureFixture[str]) -> None:
        """Test events below the configured level are dropped.

        Args:
            test_settings: Test settings fixture.
            capsys: Pytest capture fixture.
        """
        setup_logging(test_settings)
        structlog.get_logger().info("quiet_event")

        assert capsys.readouterr().err == ""
