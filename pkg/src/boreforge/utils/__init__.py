"""Boreforge utility modules."""

from __future__ import annotations

from boreforge.utils.errors import (
    BoreforgeError,
    ConfigError,
    DomainError,
    NumericalError,
    OutputError,
)


__all__ = [
    "BoreforgeError",
    "ConfigError",
    "DomainError",
    "NumericalError",
    "OutputError",
]
