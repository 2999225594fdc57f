"""CLI subcommands."""

from turbo_knng.commands.base import (
    BaseCommand,
    CliConfig,
    CommandContext,
    CommandError,
    CommandRegistry,
    InvalidArgumentError,
)
from turbo_knng.commands.handler import CommandHandler, default_registry

__all__ = [
    "BaseCommand",
    "CliConfig",
    "CommandContext",
    "CommandError",
    "CommandHandler",
    "CommandRegistry",
    "InvalidArgumentError",
    "default_registry",
]
