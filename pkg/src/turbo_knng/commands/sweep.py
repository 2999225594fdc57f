"""Size and dimension sweep command."""

import argparse
from pathlib import Path
from typing import Literal

import pandas as pd
from pydantic import Field, ValidationInfo, field_validator

from turbo_knng.commands.base import BaseCommand, CommandContext
from turbo_knng.commands.build import DescentConfig, add_descent_arguments
from turbo_knng.dataset.generators import gen_clustered, gen_gaussian
from turbo_knng.descent.driver import run
from turbo_knng.oracle.scaling import scaling_exponent

SweepKind = Literal["gaussian", "gaussian-single", "clustered"]


class SweepConfig(DescentConfig):
    """Flags of ``sweep``."""

    over: Literal["n", "d"]
    values: list[int] = Field(min_length=1)
    kind: SweepKind = "gaussian"
    n: int | None = Field(default=None, ge=2)
    d: int | None = Field(default=None, ge=1)
    c: int | None = Field(default=None, ge=2, validate_default=True)
    reorder: bool = False
    out: Path

    @field_validator("values")
    @classmethod
    def validate_values(cls, v: list[int]) -> list[int]:
        """Require a strictly increasing, positive grid.

        Args:
            v: Grid values.

        Returns:
            Validated grid.

        Raises:
            ValueError: If the grid is not strictly increasing or not positive.
        """
        if any(value < 1 for value in v):
            raise ValueError("grid values must be positive")
        if any(b <= a for a, b in zip(v, v[1:], strict=False)):
            raise ValueError("grid values must be strictly increasing")
        return v

    @field_validator("n", "d")
    @classmethod
    def validate_fixed_axis(cls, v: int | None, info: ValidationInfo) -> int | None:
        """Reject fixing the swept axis.

        Args:
            v: Fixed value of n or d.
            info: Field validation info containing other field values.

        Returns:
            Validated value.

        Raises:
            ValueError: If the flag names the axis being swept.
        """
        if v is not None and info.data.get("over") == info.field_name:
            raise ValueError(f"--{info.field_name} conflicts with --over {info.field_name}")
        return v

    @field_validator("c")
    @classmethod
    def validate_cluster_count(cls, v: int | None, info: ValidationInfo) -> int | None:
        """Require --c exactly for the clustered kind.

        Args:
            v: Cluster count.
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


class SweepCommand(BaseCommand):
    """Run build over an n or d grid and concatenate the metrics."""

    def __init__(self) -> None:
        """Initialize sweep command."""
        super().__init__(
            name="sweep",
            description="Benchmark descent over a grid of sizes or dimensions",
            usage=(
                "turbo-knng sweep --over n|d --values V [V ...] [--n N | --d D] "
                "[--kind KIND] --seed S --out PATH"
            ),
        )

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--over", choices=["n", "d"], required=True, help="axis to sweep")
        parser.add_argument("--values", type=int, nargs="+", required=True, help="grid values")
        parser.add_argument(
            "--kind",
            choices=["gaussian", "gaussian-single", "clustered"],
            default="gaussian",
            help="synthetic dataset kind (default: gaussian)",
        )
        parser.add_argument("--n", type=int, default=None, help="fixed n when sweeping d (default: 16384)")
        parser.add_argument("--d", type=int, default=None, help="fixed d when sweeping n (default: 8)")
        parser.add_argument("--c", type=int, default=None, help="cluster count (clustered only)")
        add_descent_arguments(parser)
        parser.add_argument("--reorder", action="store_true", help="apply greedy reordering mid-run")
        parser.add_argument("--out", type=Path, required=True, help="concatenated metrics CSV path")

    def _execute(self, ctx: CommandContext) -> None:
        """Execute sweep command.

        Args:
            ctx: Command context.
        """
        config = SweepConfig(**vars(ctx.args))
        params = config.run_params(ctx.settings, reorder_enabled=config.reorder)

        frames = []
        totals = []
        for value in config.values:
            n = value if config.over == "n" else (config.n or 16384)
            d = value if config.over == "d" else (config.d or 8)
            if config.kind == "clustered":
                assert config.c is not None
                dataset, _ = gen_clustered(n, d, config.c, config.seed)
            else:
                dataset = gen_gaussian(n, d, config.kind == "gaussian-single", config.seed)

            _, metrics, _ = run(dataset, params)
            frame = metrics.to_frame()
            frame.insert(0, "d", d)
            frame.insert(0, "n", n)
            frames.append(frame)
            totals.append(metrics.total_dist_evals)
            ctx.emit(metrics.summary_line())
            self._logger.info("sweep_point_completed", n=n, d=d, dist_evals=metrics.total_dist_evals)

        pd.concat(frames, ignore_index=True).to_csv(config.out, index=False)

        if config.over == "n" and len(config.values) >= 3:
            ctx.emit(f"scaling_exponent={scaling_exponent(config.values, totals):.4f}")
