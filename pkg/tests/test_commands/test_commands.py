"""Test suite for the command infrastructure and flag models.

Covers the registry, the handler's parser, error conversion in
BaseCommand.execute and the validators of each subcommand's config.
"""

import argparse
import io
from pathlib import Path

import pytest
from pydantic import BaseModel, Field, ValidationError

from turbo_knng.commands.base import (
    BaseCommand,
    CommandContext,
    CommandError,
    CommandRegistry,
    InvalidArgumentError,
    format_validation_error,
)
from turbo_knng.commands.build import BuildCommand, BuildConfig, DescentConfig
from turbo_knng.commands.generate import GenerateConfig
from turbo_knng.commands.handler import CommandHandler, default_registry
from turbo_knng.commands.recall import RecallConfig
from turbo_knng.commands.sweep import SweepConfig
from turbo_knng.config import Settings
from turbo_knng.errors import DatasetFormatError, ParameterError


class RaisingCommand(BaseCommand):
    """Command whose body raises a configured exception."""

    def __init__(self, error: Exception | None = None) -> None:
        super().__init__(name="raise-it", description="Raise an error", usage="raise-it")
        self.error = error

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--value", type=int, default=0)

    def _execute(self, ctx: CommandContext) -> None:
        if self.error is not None:
            raise self.error
        ctx.emit(f"value={ctx.args.value}")


@pytest.fixture
def context(test_settings: Settings) -> CommandContext:
    """Context with an in-memory output stream.

    Args:
        test_settings: Test settings fixture.

    Returns:
        CommandContext writing to a StringIO.
    """
    return CommandContext(
        args=argparse.Namespace(command="raise-it", value=3),
        settings=test_settings,
        stdout=io.StringIO(),
    )


@pytest.mark.unit
class TestCommandRegistry:
    """Test suite for CommandRegistry."""

    def test_register_and_get(self) -> None:
        """Test registered commands are retrievable by name."""
        registry = CommandRegistry()
        command = RaisingCommand()

        registry.register(command)

        assert registry.get("raise-it") is command
        assert registry.get("missing") is None

    def test_default_registry(self) -> None:
        """Test every subcommand is registered."""
        assert default_registry().list_commands() == [
            "build",
            "generate",
            "recall",
            "reorder-eval",
            "sweep",
        ]


@pytest.mark.unit
class TestCommandHandler:
    """Test suite for CommandHandler."""

    def test_parse_build(self) -> None:
        """Test build flags map onto namespace attributes."""
        args = CommandHandler().parse(
            ["build", "--dataset", "x.bin", "--seed", "3", "--k", "7", "--out", "g.csv", "--reorder"]
        )

        assert args.command == "build"
        assert args.dataset == Path("x.bin")
        assert args.k == 7
        assert args.graph_out == Path("g.csv")
        assert args.reorder is True
        assert args.strategy == "turbo"

    def test_subcommand_required(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test a bare invocation is a one-line usage error.

        Args:
            capsys: Pytest capture fixture.
        """
        with pytest.raises(SystemExit) as exc:
            CommandHandler().parse([])

        assert exc.value.code == 2
        err = capsys.readouterr().err
        assert err.startswith("turbo-knng: error:")
        assert len(err.strip().splitlines()) == 1

    @pytest.mark.parametrize(
        "argv",
        [
            ["build", "--dataset", "x", "--seed", "1", "--strategy", "heap"],
            ["build", "--dataset", "x", "--seed", "one"],
            ["build", "--seed", "1"],
            ["sweep", "--over", "n", "--values"],
            ["frobnicate"],
        ],
    )
    def test_usage_errors_are_one_line(
        self, capsys: pytest.CaptureFixture[str], argv: list[str]
    ) -> None:
        """Test malformed arguments exit 2 with a single stderr line.

        Args:
            capsys: Pytest capture fixture.
            argv: Malformed argument list.
        """
        with pytest.raises(SystemExit) as exc:
            CommandHandler().parse(argv)

        assert exc.value.code == 2
        captured = capsys.readouterr()
        assert captured.out == ""
        assert len(captured.err.strip().splitlines()) == 1
        assert "error:" in captured.err

    def test_dispatch_custom_registry(self, context: CommandContext) -> None:
        """Test dispatch runs the named command.

        Args:
            context: Command context fixture.
        """
        registry = CommandRegistry()
        registry.register(RaisingCommand())
        handler = CommandHandler(registry)

        handler.dispatch(context)

        assert context.stdout.getvalue() == "value=3\n"  # type: ignore[attr-defined]

    def test_dispatch_unknown(self, context: CommandContext) -> None:
        """Test an unregistered name raises KeyError.

        Args:
            context: Command context fixture.
        """
        handler = CommandHandler(CommandRegistry())

        with pytest.raises(KeyError):
            handler.dispatch(context)


@pytest.mark.unit
class TestBaseCommandExecute:
    """Test suite for BaseCommand.execute() error conversion."""

    def test_success(self, context: CommandContext) -> None:
        """Test a successful body writes its output.

        Args:
            context: Command context fixture.
        """
        RaisingCommand().execute(context)

        assert context.stdout.getvalue() == "value=3\n"  # type: ignore[attr-defined]

    @pytest.mark.parametrize(
        "error",
        [ParameterError("k must satisfy 1 <= k < n"), DatasetFormatError("bad magic"), OSError("disk full")],
    )
    def test_library_errors_become_command_errors(
        self, context: CommandContext, error: Exception
    ) -> None:
        """Test known failures keep their message.

        Args:
            context: Command context fixture.
            error: Exception raised by the body.
        """
        with pytest.raises(CommandError, match=str(error)) as exc_info:
            RaisingCommand(error).execute(context)

        assert not isinstance(exc_info.value, InvalidArgumentError)

    def test_validation_error_is_invalid_argument(self, context: CommandContext) -> None:
        """Test pydantic failures become InvalidArgumentError.

        Args:
            context: Command context fixture.
        """

        class Flags(BaseModel):
            n: int = Field(ge=2)

        with pytest.raises(ValidationError) as validation:
            Flags(n=0)

        with pytest.raises(InvalidArgumentError, match="^n: "):
            RaisingCommand(validation.value).execute(context)

    def test_command_error_passes_through(self, context: CommandContext) -> None:
        """Test command errors are re-raised unchanged.

        Args:
            context: Command context fixture.
        """
        error = InvalidArgumentError("dataset not found: x.bin")

        with pytest.raises(InvalidArgumentError) as exc_info:
            RaisingCommand(error).execute(context)

        assert exc_info.value is error

    def test_unexpected_error_wrapped(self, context: CommandContext) -> None:
        """Test unexpected exceptions are wrapped with a prefix.

        Args:
            context: Command context fixture.
        """
        with pytest.raises(CommandError, match="^Command failed: boom$"):
            RaisingCommand(RuntimeError("boom")).execute(context)

    def test_require_file(self, tmp_path: Path) -> None:
        """Test missing inputs are reported by description.

        Args:
            tmp_path: Pytest temporary directory.
        """
        with pytest.raises(InvalidArgumentError, match="dataset not found"):
            RaisingCommand().require_file(tmp_path / "missing.bin", "dataset")


@pytest.mark.unit
class TestConfigModels:
    """Test suite for the per-command flag models."""

    def test_format_validation_error(self) -> None:
        """Test errors collapse into one line."""
        with pytest.raises(ValidationError) as exc_info:
            GenerateConfig(kind="gaussian", n=1, d=0, seed=1, out=Path("x"))

        message = format_validation_error(exc_info.value)

        assert "\n" not in message
        assert message.startswith("n: ")
        assert "; d: " in message

    def test_generate_requires_c_for_clustered(self) -> None:
        """Test --c is mandatory for clustered data."""
        with pytest.raises(ValidationError, match="--c is required"):
            GenerateConfig(kind="clustered", n=100, d=8, seed=1, out=Path("x"))

    def test_generate_rejects_c_for_gaussian(self) -> None:
        """Test --c is refused for unclustered kinds."""
        with pytest.raises(ValidationError, match="only applies"):
            GenerateConfig(kind="gaussian", n=100, d=8, c=4, seed=1, out=Path("x"))

    def test_generate_ignores_command_attribute(self) -> None:
        """Test the namespace's command entry does not fail validation."""
        config = GenerateConfig(
            command="generate", kind="gaussian-single", n=10, d=3, c=None, seed=0, out=Path("x")
        )

        assert config.kind == "gaussian-single"

    def test_build_reorder_after_needs_reorder(self) -> None:
        """Test --reorder-after without --reorder conflicts."""
        with pytest.raises(ValidationError, match="requires --reorder"):
            BuildConfig(dataset=Path("x"), seed=1, reorder_after=2)

        assert BuildConfig(dataset=Path("x"), seed=1, reorder=True, reorder_after=2).reorder_after == 2

    def test_descent_run_params(self, test_settings: Settings) -> None:
        """Test unset flags fall back to settings.

        Args:
            test_settings: Test settings fixture.
        """
        config = DescentConfig(k=8, strategy="naive", seed=5)

        params = config.run_params(test_settings, reorder_enabled=True)

        assert params.k == 8
        assert params.max_candidates == test_settings.max_candidates
        assert params.termination_delta == test_settings.termination_delta
        assert params.selection_strategy == "naive"
        assert params.seed == 5
        assert params.reorder_enabled is True

    def test_descent_negative_seed(self) -> None:
        """Test seeds must be non-negative."""
        with pytest.raises(ValidationError):
            DescentConfig(seed=-1)

    @pytest.mark.parametrize(
        "dataset,exact",
        [(None, None), (Path("d.bin"), Path("e.csv"))],
    )
    def test_recall_needs_one_reference(self, dataset: Path | None, exact: Path | None) -> None:
        """Test exactly one of --dataset and --exact is required.

        Args:
            dataset: Dataset path flag.
            exact: Exact graph path flag.
        """
        with pytest.raises(ValidationError):
            RecallConfig(graph=Path("g.csv"), dataset=dataset, exact=exact)

    @pytest.mark.parametrize(
        "overrides,match",
        [
            ({"values": [100, 100, 200]}, "strictly increasing"),
            ({"values": [0, 100]}, "positive"),
            ({"n": 500}, "conflicts with --over n"),
            ({"kind": "clustered"}, "--c is required"),
            ({"c": 4}, "only applies"),
        ],
    )
    def test_sweep_validation(self, overrides: dict, match: str) -> None:
        """Test conflicting sweep flags are rejected.

        Args:
            overrides: Flag values to apply.
            match: Expected message fragment.
        """
        flags = {"over": "n", "values": [100, 200, 400], "seed": 1, "out": Path("s.csv")}
        flags.update(overrides)

        with pytest.raises(ValidationError, match=match):
            SweepConfig(**flags)

    def test_build_command_metadata(self) -> None:
        """Test the build command describes itself."""
        command = BuildCommand()

        assert command.name == "build"
        assert "--dataset" in command.usage
