"""Synthetic dataset generation command."""

import argparse
from pathlib import Path
from typing import Literal

from pydantic import Field, ValidationInfo, field_validator

from turbo_knng.commands.base import BaseCommand, CliConfig, CommandContext
from turbo_knng.dataset.generators import gen_clustered, gen_gaussian
from turbo_knng.dataset.io import labels_path_for, save_binary, save_labels

DatasetKind = Literal["gaussian", "gaussian-single", "clustered"]


class GenerateConfig(CliConfig):
    """Flags of ``generate``."""

    kind: DatasetKind
    n: int = Field(ge=2)
    d: int = Field(ge=1)
    c: int | None = Field(default=None, ge=2, validate_default=True)
    seed: int = Field(ge=0)
    out: Path

    @field_validator("c")
    @classmethod
    def validate_cluster_count(cls, v: int | None, info: ValidationInfo) -> int | None:
        """Require --c exactly for the clustered kind.

        Args:
            v: Cluster count, if given.
            info: Field validation info containing other field values.

        Returns:
            Validated cluster count.

        Raises:
            ValueError: If --c is missing for clustered data or given otherwise.
        """
        kind = info.data.get("kind")
        if kind == "clustered" and v is None:
            raise ValueError("--c is required for the clustered kind")
        if kind is not None and kind != "clustered" and v is not None:
            raise ValueError(f"--c only applies to the clustered kind, not {kind}")
        return v


class GenerateCommand(BaseCommand):
    """Write a synthetic dataset (and labels sidecar for clustered data)."""

    def __init__(self) -> None:
        """Initialize generate command."""
        super().__init__(
            name="generate",
            description="Generate a synthetic dataset in the binary format",
            usage="turbo-knng generate --kind KIND --n N --d D [--c C] --seed S --out PATH",
        )

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--kind", required=True, choices=["gaussian", "gaussian-single", "clustered"])
        parser.add_argument("--n", type=int, required=True, help="number of points")
        parser.add_argument("--d", type=int, required=True, help="dimensionality")
        parser.add_argument("--c", type=int, default=None, help="cluster count (clustered only)")
        parser.add_argument("--seed", type=int, required=True, help="RNG seed")
        parser.add_argument("--out", type=Path, required=True, help="output dataset path")

    def _execute(self, ctx: CommandContext) -> None:
        """Execute generate command.

        Args:
            ctx: Command context.
        """
        config = GenerateConfig(**vars(ctx.args))

        if config.kind == "clustered":
            assert config.c is not None
            dataset, labels = gen_clustered(config.n, config.d, config.c, config.seed)
            labels_out = labels_path_for(config.out)
            save_binary(dataset, config.out)
            save_labels(labels, labels_out)
            ctx.emit(f"n={dataset.n} d={dataset.d} c={labels.c} out={config.out} labels={labels_out}")
            return

        dataset = gen_gaussian(config.n, config.d, config.kind == "gaussian-single", config.seed)
        save_binary(dataset, config.out)
        ctx.emit(f"n={dataset.n} d={dataset.d} out={config.out}")
