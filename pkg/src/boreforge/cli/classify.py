"""The ``boreforge classify`` subcommand."""

from __future__ import annotations

import argparse

from boreforge.cli.common import add_common_args, execute
from boreforge.core.schemas import Command


def register_classify_parser(subparsers: argparse._SubParsersAction[argparse.ArgumentParser]) -> None:
    """Register the ``classify`` subcommand.

    Args:
        subparsers: The subparsers action from the parent parser.
    """
    parser = subparsers.add_parser(
        "classify",
        help="Classify (g, A) as ebbing (C1), surging (Cminus1) or Excluded.",
    )
    add_common_args(parser)
    parser.set_defaults(func=run_classify)


def run_classify(args: argparse.Namespace) -> int:
    """Execute the classify subcommand.

    Returns:
        0 for C1 or Cminus1, 2 for Excluded or invalid input.
    """
    return execute(args, Command.CLASSIFY)
