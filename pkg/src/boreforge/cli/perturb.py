"""The ``boreforge perturb`` subcommand."""

from __future__ import annotations

import argparse

from boreforge.cli.common import add_common_args, execute
from boreforge.core.perturbation.registry import list_perturbations
from boreforge.core.schemas import Command


def register_perturb_parser(subparsers: argparse._SubParsersAction[argparse.ArgumentParser]) -> None:
    """Register the ``perturb`` subcommand.

    Args:
        subparsers: The subparsers action from the parent parser.
    """
    parser = subparsers.add_parser(
        "perturb",
        help="Perturbed bore orbits for a family psi(lambda, t, X) and their Lipschitz ratio.",
    )
    add_common_args(parser)
    parser.add_argument(
        "--family",
        choices=list_perturbations(),
        default=None,
        help="Registered perturbation family (default: gaussian_bump).",
    )
    parser.add_argument(
        "--lambdas",
        type=float,
        nargs="+",
        default=None,
        help="Family parameter values (default: 0 1e-4).",
    )
    parser.add_argument("--t0", type=float, default=None, help="Bump centre (gaussian_bump).")
    parser.add_argument("--width", type=float, default=None, help="Bump width (gaussian_bump).")
    parser.add_argument("--c", type=float, default=None, help="Shift magnitude (constant).")
    parser.add_argument("--workers", type=int, default=None, help="Threads across lambda values.")
    parser.set_defaults(func=run_perturb)


def run_perturb(args: argparse.Namespace) -> int:
    """Execute the perturb subcommand."""
    extra = {
        f"perturbation.{key}": getattr(args, key)
        for key in ("family", "lambdas", "t0", "width", "c", "workers")
    }
    return execute(args, Command.PERTURB, extra)
