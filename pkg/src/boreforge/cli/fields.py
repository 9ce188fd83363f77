"""The ``boreforge fields`` and ``boreforge residual`` subcommands."""

from __future__ import annotations

import argparse

from boreforge.cli.common import add_common_args, add_grid_args, add_svg_arg, execute
from boreforge.core.schemas import Command


def register_fields_parser(subparsers: argparse._SubParsersAction[argparse.ArgumentParser]) -> None:
    """Register the ``fields`` subcommand.

    Args:
        subparsers: The subparsers action from the parent parser.
    """
    parser = subparsers.add_parser(
        "fields",
        help="Reconstruct velocity, pressure and vorticity on a grid (fields.json).",
    )
    add_common_args(parser)
    add_grid_args(parser)
    add_svg_arg(parser)
    parser.add_argument(
        "--seeds",
        type=int,
        default=None,
        help="Streamline seeds for the SVG (default: 12).",
    )
    parser.set_defaults(func=run_fields)


def register_residual_parser(subparsers: argparse._SubParsersAction[argparse.ArgumentParser]) -> None:
    """Register the ``residual`` subcommand.

    Args:
        subparsers: The subparsers action from the parent parser.
    """
    parser = subparsers.add_parser(
        "residual",
        help="Evaluate Navier-Stokes residuals of the reconstructed fields (residual.json).",
    )
    add_common_args(parser)
    add_grid_args(parser)
    parser.set_defaults(func=run_residual)


def run_fields(args: argparse.Namespace) -> int:
    """Execute the fields subcommand."""
    return execute(args, Command.FIELDS, {"plot.seeds": args.seeds})


def run_residual(args: argparse.Namespace) -> int:
    """Execute the residual subcommand."""
    return execute(args, Command.RESIDUAL)
