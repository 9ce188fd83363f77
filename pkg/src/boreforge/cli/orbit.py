"""The ``boreforge orbit`` and ``boreforge profile`` subcommands."""

from __future__ import annotations

import argparse
from typing import Any

from boreforge.cli.common import add_common_args, add_svg_arg, execute
from boreforge.core.schemas import Command


def add_shooter_args(parser: argparse.ArgumentParser) -> None:
    """Add the shooter tolerance flags."""
    parser.add_argument(
        "--seed-offset",
        type=float,
        default=None,
        help="Distance of the manifold seed from the saddle (default: 1e-8).",
    )
    parser.add_argument(
        "--sample-spacing",
        type=float,
        default=None,
        help="Maximum spacing of the emitted samples (default: 0.05).",
    )


def shooter_overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Shooter flags as dotted overrides."""
    return {
        "orbit.seed_offset": args.seed_offset,
        "orbit.sample_spacing": args.sample_spacing,
    }


def register_orbit_parser(subparsers: argparse._SubParsersAction[argparse.ArgumentParser]) -> None:
    """Register the ``orbit`` subcommand.

    Args:
        subparsers: The subparsers action from the parent parser.
    """
    parser = subparsers.add_parser("orbit", help="Shoot the heteroclinic orbit and write orbit.csv.")
    add_common_args(parser)
    add_shooter_args(parser)
    add_svg_arg(parser)
    parser.set_defaults(func=run_orbit)


def register_profile_parser(subparsers: argparse._SubParsersAction[argparse.ArgumentParser]) -> None:
    """Register the ``profile`` subcommand.

    Args:
        subparsers: The subparsers action from the parent parser.
    """
    parser = subparsers.add_parser("profile", help="Build the shallow-water profile and write profile.csv.")
    add_common_args(parser)
    add_shooter_args(parser)
    add_svg_arg(parser)
    parser.set_defaults(func=run_profile)


def run_orbit(args: argparse.Namespace) -> int:
    """Execute the orbit subcommand."""
    return execute(args, Command.ORBIT, shooter_overrides(args))


def run_profile(args: argparse.Namespace) -> int:
    """Execute the profile subcommand."""
    return execute(args, Command.PROFILE, shooter_overrides(args))
