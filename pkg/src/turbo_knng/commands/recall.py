"""Recall evaluation command."""

import argparse
from pathlib import Path

from pydantic import Field, ValidationInfo, field_validator

from turbo_knng.commands.base import BaseCommand, CliConfig, CommandContext, InvalidArgumentError
from turbo_knng.dataset.io import load_binary
from turbo_knng.graph.table import NeighborTable
from turbo_knng.oracle.brute_force import brute_force_knng
from turbo_knng.oracle.recall import recall


class RecallConfig(CliConfig):
    """Flags of ``recall``."""

    graph: Path
    dataset: Path | None = None
    exact: Path | None = Field(default=None, validate_default=True)
    k: int | None = Field(default=None, ge=1)

    @field_validator("exact")
    @classmethod
    def validate_reference(cls, v: Path | None, info: ValidationInfo) -> Path | None:
        """Require exactly one reference: a dataset for the oracle or an exact graph.

        Args:
            v: Exact graph CSV, if given.
            info: Field validation info containing other field values.

        Returns:
            Validated path.

        Raises:
            ValueError: If neither or both references are given.
        """
        has_dataset = info.data.get("dataset") is not None
        if v is None and not has_dataset:
            raise ValueError("pass --dataset to compute the exact graph or --exact to supply one")
        if v is not None and has_dataset:
            raise ValueError("--dataset and --exact are mutually exclusive")
        return v


class RecallCommand(BaseCommand):
    """Compare a graph CSV with the exact K-NNG."""

    def __init__(self) -> None:
        """Initialize recall command."""
        super().__init__(
            name="recall",
            description="Print the recall of a graph CSV against the exact K-NNG",
            usage="turbo-knng recall --graph PATH (--dataset PATH | --exact PATH) [--k K]",
        )

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--graph", type=Path, required=True, help="graph CSV from build")
        parser.add_argument("--dataset", type=Path, default=None, help="binary dataset for the oracle")
        parser.add_argument("--exact", type=Path, default=None, help="precomputed exact graph CSV")
        parser.add_argument("--k", type=int, default=None, help="expected k (default: taken from the graph)")

    def _execute(self, ctx: CommandContext) -> None:
        """Execute recall command.

        Args:
            ctx: Command context.

        Raises:
            InvalidArgumentError: If k or n disagree between inputs.
        """
        config = RecallConfig(**vars(ctx.args))
        self.require_file(config.graph, "graph")
        approx = NeighborTable.from_csv(config.graph)
        if config.k is not None and config.k != approx.k:
            raise InvalidArgumentError(f"--k {config.k} does not match the graph's k={approx.k}")

        if config.exact is not None:
            self.require_file(config.exact, "exact graph")
            exact = NeighborTable.from_csv(config.exact)
        else:
            assert config.dataset is not None
            self.require_file(config.dataset, "dataset")
            dataset = load_binary(config.dataset)
            if dataset.n != approx.n:
                raise InvalidArgumentError(
                    f"graph has n={approx.n} nodes but the dataset has n={dataset.n}"
                )
            exact = brute_force_knng(dataset, approx.k, max_n=ctx.settings.brute_force_max_n)

        if exact.ids.shape != approx.ids.shape:
            raise InvalidArgumentError(
                f"graph shape {approx.ids.shape} does not match reference shape {exact.ids.shape}"
            )
        ctx.emit(f"recall={recall(approx, exact):.6f}")
