"""Base command infrastructure for the CLI subcommands.

This module provides the foundation for all subcommands: flag validation
through pydantic config models, error conversion, and logging.
"""

import argparse
import sys
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

import structlog
from pydantic import BaseModel, ConfigDict, ValidationError

from turbo_knng.config import Settings
from turbo_knng.errors import KnngError

logger = structlog.get_logger()


class CommandError(Exception):
    """Base exception for command errors."""

    pass


class InvalidArgumentError(CommandError):
    """Command received invalid or conflicting arguments."""

    pass


class CliConfig(BaseModel):
    """Validated flags of one subcommand.

    Subclasses declare the flags as fields with their defaults; conflicting
    combinations are rejected by validators before any work starts.
    """

    model_config = ConfigDict(frozen=True, extra="ignore")


@dataclass
class CommandContext:
    """Context for command execution.

    Attributes:
        args: Parsed command-line arguments.
        settings: Application settings providing flag defaults.
        stdout: Stream receiving command output.
    """

    args: argparse.Namespace
    settings: Settings
    stdout: TextIO = field(default_factory=lambda: sys.stdout)

    def emit(self, line: str) -> None:
        """Write one line of command output.

        Args:
            line: Text to print.
        """
        print(line, file=self.stdout)


def format_validation_error(error: ValidationError) -> str:
    """Collapse a pydantic validation error into one line.

    Args:
        error: Validation error raised by a config model.

    Returns:
        Semicolon-separated ``field: message`` pairs.
    """
    parts = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"])
        message = item["msg"]
        parts.append(f"{location}: {message}" if location else message)
    return "; ".join(parts)


class BaseCommand(ABC):
    """Base class for all subcommands.

    Attributes:
        name: Subcommand name (e.g., 'build', 'reorder-eval').
        description: Human-readable command description.
        usage: Usage string showing syntax.
    """

    def __init__(self, name: str, description: str, usage: str) -> None:
        """Initialize command.

        Args:
            name: Command name.
            description: Command description.
            usage: Usage syntax.
        """
        self.name = name
        self.description = description
        self.usage = usage
        self._logger = logger.bind(component=f"command_{name.replace('-', '_')}")

    @abstractmethod
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Declare the command's flags.

        Args:
            parser: Subparser owned by this command.
        """
        pass

    def execute(self, ctx: CommandContext) -> None:
        """Execute the command with error handling.

        Args:
            ctx: Command context.

        Raises:
            InvalidArgumentError: If flags are invalid or conflicting.
            CommandError: For other command errors.
        """
        self._logger.info("command_executing", command=self.name)

        try:
            self._execute(ctx)

        except CommandError:
            raise

        except ValidationError as e:
            raise InvalidArgumentError(format_validation_error(e)) from e

        except (KnngError, OSError) as e:
            raise CommandError(str(e)) from e

        except Exception as e:
            # Unexpected error; the traceback only shows at DEBUG so stderr keeps one line
            self._logger.debug(
                "command_error",
                command=self.name,
                error=str(e),
                exc_info=True,
            )
            raise CommandError(f"Command failed: {e}") from e

        self._logger.info("command_completed", command=self.name)

    @abstractmethod
    def _execute(self, ctx: CommandContext) -> None:
        """Execute the command logic.

        Subclasses must implement this method.

        Args:
            ctx: Command context.

        Raises:
            InvalidArgumentError: If arguments are invalid.
            CommandError: For other errors.
        """
        pass

    def require_file(self, path: Path, what: str) -> None:
        """Validate that an input file exists.

        Args:
            path: Path to check.
            what: Description used in the error message.

        Raises:
            InvalidArgumentError: If the file is missing.
        """
        if not path.is_file():
            raise InvalidArgumentError(f"{what} not found: {path}")


class CommandRegistry:
    """Registry for managing subcommands.

    Attributes:
        commands: Dictionary of command name -> command instance.
    """

    def __init__(self) -> None:
        """Initialize empty command registry."""
        self.commands: dict[str, BaseCommand] = {}
        self._logger = logger.bind(component="command_registry")

    def register(self, command: BaseCommand) -> None:
        """Register a command.

        Args:
            command: Command instance to register.
        """
        self.commands[command.name] = command
        self._logger.debug("command_registered", command=command.name)

    def get(self, name: str) -> BaseCommand | None:
        """Get a command by name.

        Args:
            name: Command name.

        Returns:
            Command instance or None if not found.
        """
        return self.commands.get(name)

    def list_commands(self) -> list[str]:
        """List registered command names.

        Returns:
            Sorted command names.
        """
        return sorted(self.commands)
