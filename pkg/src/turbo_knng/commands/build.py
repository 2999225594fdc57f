"""K-NNG build command."""

import argparse
from pathlib import Path
from typing import Any

from pydantic import Field, ValidationInfo, field_validator

from turbo_knng.commands.base import BaseCommand, CliConfig, CommandContext
from turbo_knng.config import Settings
from turbo_knng.dataset.io import load_binary
from turbo_knng.descent.driver import run
from turbo_knng.descent.params import DistanceKernel, RunParams
from turbo_knng.oracle.brute_force import brute_force_knng
from turbo_knng.oracle.recall import recall
from turbo_knng.selection.strategies import STRATEGIES, SelectionStrategy


def add_descent_arguments(parser: argparse.ArgumentParser) -> None:
    """Flags shared by every command that runs descent.

    Args:
        parser: Subparser to extend.
    """
    parser.add_argument("--k", type=int, default=None, help="neighbors per node (default: settings, 20)")
    parser.add_argument(
        "--max-candidates",
        type=int,
        default=None,
        help="candidate cap per node and iteration (default: settings, 50)",
    )
    parser.add_argument(
        "--strategy", choices=list(STRATEGIES), default="turbo", help="candidate selection (default: turbo)"
    )
    parser.add_argument(
        "--kernel", choices=["scalar", "blocked"], default="blocked", help="distance kernel (default: blocked)"
    )
    parser.add_argument(
        "--delta", type=float, default=None, help="termination threshold fraction (default: settings, 0.001)"
    )
    parser.add_argument(
        "--max-iterations", type=int, default=None, help="iteration cap (default: settings, 30)"
    )
    parser.add_argument("--seed", type=int, required=True, help="RNG seed")


class DescentConfig(CliConfig):
    """Descent flags shared by build, reorder-eval and sweep."""

    k: int | None = None
    max_candidates: int | None = None
    strategy: SelectionStrategy = "turbo"
    kernel: DistanceKernel = "blocked"
    delta: float | None = None
    max_iterations: int | None = None
    seed: int = Field(ge=0)

    def run_params(self, settings: Settings, **extra: Any) -> RunParams:
        """Merge flags over settings defaults.

        Args:
            settings: Settings supplying defaults for unset flags.
            **extra: Further RunParams fields.

        Returns:
            Validated run parameters.
        """
        return RunParams.from_settings(
            settings,
            k=self.k,
            max_candidates=self.max_candidates,
            selection_strategy=self.strategy,
            kernel=self.kernel,
            termination_delta=self.delta,
            max_iterations=self.max_iterations,
            seed=self.seed,
            **extra,
        )


class BuildConfig(DescentConfig):
    """Flags of ``build``."""

    dataset: Path
    reorder: bool = False
    reorder_after: int | None = Field(default=None, validate_default=True)
    graph_out: Path | None = None
    metrics_out: Path | None = None
    recall: bool = False

    @field_validator("reorder_after")
    @classmethod
    def validate_reorder_after(cls, v: int | None, info: ValidationInfo) -> int | None:
        """Reject --reorder-after without --reorder.

        Args:
            v: Iteration after which to reorder.
            info: Field validation info containing other field values.

        Returns:
            Validated iteration.

        Raises:
            ValueError: If the flag conflicts with --reorder being off.
        """
        if v is not None and not info.data.get("reorder", False):
            raise ValueError("--reorder-after requires --reorder")
        return v


class BuildCommand(BaseCommand):
    """Run descent on a dataset file and write the graph and metrics."""

    def __init__(self) -> None:
        """Initialize build command."""
        super().__init__(
            name="build",
            description="Build an approximate K-NNG with NN-Descent",
            usage=(
                "turbo-knng build --dataset PATH --seed S [--k K] [--strategy naive|fused|turbo] "
                "[--reorder] [--graph-out PATH] [--metrics-out PATH] [--recall]"
            ),
        )

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--dataset", type=Path, required=True, help="binary dataset file")
        add_descent_arguments(parser)
        parser.add_argument("--reorder", action="store_true", help="apply greedy reordering mid-run")
        parser.add_argument(
            "--reorder-after",
            type=int,
            default=None,
            help="iteration after which to reorder (default: settings, 1)",
        )
        parser.add_argument("--graph-out", "--out", type=Path, default=None, help="graph CSV path")
        parser.add_argument("--metrics-out", type=Path, default=None, help="metrics CSV path")
        parser.add_argument(
            "--recall", action="store_true", help="measure recall against the brute-force oracle"
        )

    def _execute(self, ctx: CommandContext) -> None:
        """Execute build command.

        Args:
            ctx: Command context.
        """
        config = BuildConfig(**vars(ctx.args))
        params = config.run_params(
            ctx.settings,
            reorder_enabled=config.reorder,
            reorder_after_iteration=config.reorder_after,
        )
        self.require_file(config.dataset, "dataset")
        dataset = load_binary(config.dataset)

        graph, metrics, _ = run(dataset, params)

        if config.recall:
            exact = brute_force_knng(dataset, params.k, max_n=ctx.settings.brute_force_max_n)
            metrics.recall = recall(graph, exact)
        if config.graph_out is not None:
            graph.to_table().to_csv(config.graph_out)
        if config.metrics_out is not None:
            metrics.to_csv(config.metrics_out)

        ctx.emit(metrics.summary_line())
