"""Command-line interface for turbo_knng.

This module provides the CLI entry point. Command output goes to stdout;
log lines, including the single diagnostic of a failed command, go to
stderr.
"""

import sys
from typing import NoReturn

import structlog

from turbo_knng.commands.base import CommandContext, CommandError
from turbo_knng.commands.handler import CommandHandler
from turbo_knng.config import Settings, get_settings

logger = structlog.get_logger()


def setup_logging(settings: Settings) -> None:
    """Configure structured logging on stderr.

    Args:
        settings: Application settings.
    """
    # Map log level string to numeric value
    log_level_map = {
        "DEBUG": 10,
        "INFO": 20,
        "WARNING": 30,
        "ERROR": 40,
        "CRITICAL": 50,
    }

    log_level = log_level_map.get(settings.log_level.upper(), 30)  # Default to WARNING

    # Configure structlog
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            (
                structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty())
                if settings.log_format == "console"
                else structlog.processors.JSONRenderer()
            ),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(log_level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def run_cli(argv: list[str] | None = None, settings: Settings | None = None) -> int:
    """Parse arguments, run one subcommand and return its exit code.

    Args:
        argv: Arguments without the program name; sys.argv if None.
        settings: Settings to use; the global instance if omitted.

    Returns:
        0 on success, 1 if the command failed.
    """
    settings = settings or get_settings()
    setup_logging(settings)

    handler = CommandHandler()
    args = handler.parse(argv)
    log = logger.bind(component="cli")

    try:
        handler.dispatch(CommandContext(args=args, settings=settings))
    except CommandError as e:
        log.error("command_failed", command=args.command, error=str(e))
        return 1

    return 0


def main() -> NoReturn:
    """Main entry point for the CLI.

    This function is called when running `turbo-knng` from the command line.
    """
    try:
        sys.exit(run_cli())

    except KeyboardInterrupt:
        logger.warning("interrupted")
        sys.exit(130)


if __name__ == "__main__":
    main()
