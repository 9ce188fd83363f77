"""Flags shared by every subcommand and the config resolution step."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from boreforge.core.config import ConfigParser, merge_config
from boreforge.core.runner import EXIT_DOMAIN, run
from boreforge.core.schemas import Command
from boreforge.utils.errors import ConfigError


logger = logging.getLogger(__name__)

_PARAM_FLAGS: tuple[tuple[str, str, str], ...] = (
    ("--mu", "mu", "Viscosity μ > 0."),
    ("--a", "a", "Navier-slip parameter a > 0."),
    ("--g", "g", "Vertical gravity g ≥ 0."),
    ("--A", "A", "Flux parameter A in (0, 1)."),
    ("--sigma", "sigma", "Surface tension σ ≥ 0."),
    ("--eps", "eps", "Shallowness ε in (0, 1)."),
)


def add_common_args(parser: argparse.ArgumentParser, params: bool = True) -> None:
    """Add ``--config``, ``--output-dir`` and (optionally) the parameter flags."""
    parser.add_argument(
        "--config",
        type=Path,
        default=None,
        help="YAML or JSON configuration file; flags override its values.",
    )
    parser.add_argument(
        "--output-dir",
        type=Path,
        default=None,
        help="Directory for data products (default: ./out).",
    )
    if params:
        for flag, dest, text in _PARAM_FLAGS:
            parser.add_argument(flag, dest=dest, type=float, default=None, help=text)


def add_grid_args(parser: argparse.ArgumentParser) -> None:
    """Add the field grid flags."""
    parser.add_argument("--nx", type=int, default=None, help="Grid nodes along x (default: 128).")
    parser.add_argument("--ny", type=int, default=None, help="Grid nodes along the depth (default: 33).")
    parser.add_argument("--x-min", type=float, default=None, help="Left end of the x window.")
    parser.add_argument("--x-max", type=float, default=None, help="Right end of the x window.")
    parser.add_argument(
        "--frame",
        choices=("traveling", "lab"),
        default=None,
        help="Velocity frame of the stored fields (default: traveling).",
    )


def add_svg_arg(parser: argparse.ArgumentParser) -> None:
    """Add ``--svg``."""
    parser.add_argument(
        "--svg",
        action="store_true",
        default=None,
        help="Also write SVG figures next to the data files.",
    )


def collect_overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Flag values keyed the way :func:`~boreforge.core.config.merge_config` expects."""
    overrides: dict[str, Any] = {dest: getattr(args, dest, None) for _, dest, _ in _PARAM_FLAGS}
    overrides["output_dir"] = args.output_dir
    for dest, key in (
        ("nx", "grid.nx"),
        ("ny", "grid.ny"),
        ("x_min", "grid.x_min"),
        ("x_max", "grid.x_max"),
        ("frame", "grid.frame"),
        ("svg", "plot.svg"),
    ):
        overrides[key] = getattr(args, dest, None)
    return overrides


def execute(args: argparse.Namespace, command: Command, extra: Mapping[str, Any] | None = None) -> int:
    """Resolve the run configuration from file and flags, then run it.

    Returns:
        The runner's exit code, or 2 when the configuration is invalid.
    """
    try:
        file_config = ConfigParser().parse_file(args.config) if args.config is not None else None
        config = merge_config(command, file_config, {**collect_overrides(args), **(extra or {})})
    except ConfigError as err:
        sys.stderr.write(f"Error: {err}\n")
        return EXIT_DOMAIN
    return run(config)
