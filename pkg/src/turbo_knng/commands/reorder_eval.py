"""Reordering evaluation command."""

import argparse
from pathlib import Path

from pydantic import Field

from turbo_knng.commands.base import BaseCommand, CommandContext
from turbo_knng.commands.build import DescentConfig, add_descent_arguments
from turbo_knng.dataset.io import labels_path_for, load_binary, load_labels
from turbo_knng.descent.driver import run
from turbo_knng.errors import ParameterError
from turbo_knng.reorder.evaluation import window_cluster_fraction
from turbo_knng.reorder.greedy import greedy_cluster


class ReorderEvalConfig(DescentConfig):
    """Flags of ``reorder-eval``."""

    dataset: Path
    labels: Path | None = None
    window: int | None = Field(default=None, ge=1)
    out: Path


class ReorderEvalCommand(BaseCommand):
    """Run early descent iterations, reorder greedily and report window fractions."""

    def __init__(self) -> None:
        """Initialize reorder-eval command."""
        super().__init__(
            name="reorder-eval",
            description="Write per-window cluster fractions of the greedy reordering",
            usage=(
                "turbo-knng reorder-eval --dataset PATH [--labels PATH] --seed S "
                "[--k K] [--window W] --out PATH"
            ),
        )

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--dataset", type=Path, required=True, help="binary dataset file")
        parser.add_argument(
            "--labels", type=Path, default=None, help="labels CSV (default: <dataset>.labels.csv)"
        )
        add_descent_arguments(parser)
        parser.add_argument(
            "--window", type=int, default=None, help="window length (default: settings, 2000)"
        )
        parser.add_argument("--out", type=Path, required=True, help="window-fraction CSV path")

    def _execute(self, ctx: CommandContext) -> None:
        """Execute reorder-eval command.

        Args:
            ctx: Command context.
        """
        config = ReorderEvalConfig(**vars(ctx.args))
        params = config.run_params(ctx.settings).model_copy(
            update={"max_iterations": 1 if config.max_iterations is None else config.max_iterations}
        )
        window = config.window or ctx.settings.window_size
        labels_path = config.labels or labels_path_for(config.dataset)
        self.require_file(config.dataset, "dataset")
        self.require_file(labels_path, "labels")

        dataset = load_binary(config.dataset)
        labels = load_labels(labels_path)
        if labels.n != dataset.n:
            raise ParameterError(f"labels cover {labels.n} points but the dataset has {dataset.n}")

        graph, _, _ = run(dataset, params)
        perm = greedy_cluster(graph)
        fractions = window_cluster_fraction(labels, perm, window)
        fractions.to_csv(config.out)

        peak = fractions.max_fraction()
        head = peak[fractions.starts < dataset.n // 4]
        ctx.emit(
            f"windows={len(fractions.starts)} "
            f"head_max_fraction={float(head.mean()) if head.size else float(peak[0]):.4f} "
            f"tail_max_fraction={float(peak[-1]):.4f}"
        )
