"""The ``boreforge sweep`` subcommand.

Region and orbit sweeps run over a (g, A) grid, ε sweeps over a list of
shallowness values.  Failed points are recorded as rows, never abort the
sweep, unless ``--on-error abort_sweep`` is given.
"""

from __future__ import annotations

import argparse

from boreforge.cli.common import add_common_args, add_grid_args, add_svg_arg, execute
from boreforge.core.schemas import Command


def register_sweep_parser(subparsers: argparse._SubParsersAction[argparse.ArgumentParser]) -> None:
    """Register the ``sweep`` subcommand.

    Args:
        subparsers: The subparsers action from the parent parser.
    """
    parser = subparsers.add_parser("sweep", help="Sweep over a (g, A) grid or a list of eps values.")
    add_common_args(parser)
    add_grid_args(parser)
    add_svg_arg(parser)
    parser.add_argument("--kind", choices=("region", "orbit", "eps"), default=None, help="What to sweep.")
    parser.add_argument("--g-min", type=float, default=None, help="Smallest g (default: 0).")
    parser.add_argument("--g-max", type=float, default=None, help="Largest g (default: 40).")
    parser.add_argument("--g-count", type=int, default=None, help="Number of g values (default: 200).")
    parser.add_argument("--A-min", dest="A_min", type=float, default=None, help="Smallest A (default: 0.005).")
    parser.add_argument("--A-max", dest="A_max", type=float, default=None, help="Largest A (default: 0.995).")
    parser.add_argument("--A-count", dest="A_count", type=int, default=None, help="Number of A values (default: 200).")
    parser.add_argument(
        "--eps-values",
        type=float,
        nargs="+",
        default=None,
        help="Shallowness values of an eps sweep (default: 0.2 0.1 0.05).",
    )
    parser.add_argument(
        "--on-error",
        choices=("skip_point", "abort_sweep"),
        default=None,
        help="Failed point policy (default: skip_point).",
    )
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (capped by BOREFORGE_THREADS).")
    parser.set_defaults(func=run_sweep)


def run_sweep(args: argparse.Namespace) -> int:
    """Execute the sweep subcommand."""
    extra = {
        f"sweep.{key}": getattr(args, key)
        for key in ("kind", "g_min", "g_max", "g_count", "A_min", "A_max", "A_count", "eps_values", "on_error", "threads")
    }
    return execute(args, Command.SWEEP, extra)
