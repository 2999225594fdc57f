"""Command handler for dispatching CLI subcommands.

This module builds the argument parser from the registered commands and
routes a parsed invocation to its command.
"""

import argparse
from typing import NoReturn

import structlog

from turbo_knng.commands.base import BaseCommand, CommandContext, CommandRegistry
from turbo_knng.commands.build import BuildCommand
from turbo_knng.commands.generate import GenerateCommand
from turbo_knng.commands.recall import RecallCommand
from turbo_knng.commands.reorder_eval import ReorderEvalCommand
from turbo_knng.commands.sweep import SweepCommand

logger = structlog.get_logger()


class UsageErrorParser(argparse.ArgumentParser):
    """Argument parser whose usage errors are a single stderr line."""

    def error(self, message: str) -> NoReturn:
        """Report a usage error and exit with status 2.

        Args:
            message: Description of the problem.
        """
        self.exit(2, f"{self.prog}: error: {message}\n")


def default_registry() -> CommandRegistry:
    """Registry holding every subcommand.

    Returns:
        Populated CommandRegistry.
    """
    registry = CommandRegistry()
    for command in (
        GenerateCommand(),
        BuildCommand(),
        RecallCommand(),
        ReorderEvalCommand(),
        SweepCommand(),
    ):
        registry.register(command)
    return registry


class CommandHandler:
    """Parses argv and dispatches to registered commands.

    Attributes:
        registry: Commands available to the parser.
        parser: Top-level argument parser.
    """

    def __init__(self, registry: CommandRegistry | None = None) -> None:
        """Initialize command handler.

        Args:
            registry: Command registry; all built-in commands if omitted.
        """
        self.registry = registry or default_registry()
        self.parser = self._build_parser()
        self._logger = logger.bind(component="command_handler")

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = UsageErrorParser(
            prog="turbo-knng",
            description="Approximate K-nearest-neighbor graphs with NN-Descent",
        )
        subparsers = parser.add_subparsers(dest="command", required=True)
        for name in self.registry.list_commands():
            command = self.registry.commands[name]
            subparser = subparsers.add_parser(name, help=command.description, description=command.description)
            command.add_arguments(subparser)
        return parser

    def parse(self, argv: list[str] | None) -> argparse.Namespace:
        """Parse command-line arguments.

        Args:
            argv: Arguments without the program name; sys.argv if None.

        Returns:
            Parsed namespace with a ``command`` attribute.
        """
        return self.parser.parse_args(argv)

    def command_for(self, args: argparse.Namespace) -> BaseCommand:
        command = self.registry.get(args.command)
        if command is None:
            raise KeyError(args.command)
        return command

    def dispatch(self, ctx: CommandContext) -> None:
        """Run the command named in the context's arguments.

        Args:
            ctx: Command context.

        Raises:
            CommandError: If the command fails.
        """
        command = self.command_for(ctx.args)
        self._logger.debug("command_dispatched", command=command.name)
        command.execute(ctx)
