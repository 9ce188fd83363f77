"""Boreforge error hierarchy.

Defines the base exception and the stage-specific error classes raised
by the parameter layer, the numerical kernels, configuration loading,
and output emission.  ``DomainError`` subclasses describe inputs the
user can correct (CLI exit code 2); ``NumericalError`` subclasses signal
a solver or consistency failure (CLI exit code 1).
"""

from __future__ import annotations

from typing import Any


class BoreforgeError(Exception):
    """Base exception for all Boreforge errors."""


# ── Domain (user input) ───────────────────────────────────────────────


class DomainError(BoreforgeError):
    """Inputs outside the region where the requested object exists."""


class ParameterError(DomainError):
    """A physical or nondimensional parameter violates its constraints."""


class CriticalSpeedError(ParameterError):
    """The frame speed equals the critical value 2·g·a/κ (Fr = 1)."""


class ExcludedRegionError(DomainError):
    """The (g, A) pair lies in the Excluded region; no bore is constructed.

    Args:
        message: Human-readable description.
        g_lower: Upper bound on g for the ebbing region at this A.
        g_upper: Lower bound on g for the surging region at this A.
    """

    def __init__(self, message: str, g_lower: float, g_upper: float) -> None:
        super().__init__(message)
        self.g_lower = g_lower
        self.g_upper = g_upper


class GridDomainError(DomainError):
    """A grid or sampler request falls outside the orbit's t-range."""


class ContractionError(DomainError):
    """A fixed-point iteration left the contraction regime.

    Args:
        message: Human-readable description.
        ratio: The observed ratio of successive iterate differences.
    """

    def __init__(self, message: str, ratio: float) -> None:
        super().__init__(message)
        self.ratio = ratio


class ConfigError(DomainError):
    """Base error for configuration issues."""


class ConfigFileError(ConfigError):
    """Cannot read or parse the configuration file (I/O or YAML syntax)."""


class ConfigValidationError(ConfigError):
    """The configuration has invalid schema or content."""


# ── Numerical stage ───────────────────────────────────────────────────


class NumericalError(BoreforgeError):
    """A numerical kernel failed or produced an inconsistent result."""


class BracketError(NumericalError):
    """Bracket expansion for a root finder did not produce a sign change."""


class SpectrumError(NumericalError):
    """An equilibrium has a linear character contradicting the Liénard structure."""


class TrappingBreachError(NumericalError):
    """The shot trajectory left the trapping region.

    Args:
        message: Human-readable description.
        violation: The maximal trapping violation observed.
    """

    def __init__(self, message: str, violation: float) -> None:
        super().__init__(message)
        self.violation = violation


class SlowConvergenceError(NumericalError):
    """The trajectory did not reach the terminal ball within the time budget.

    Args:
        message: Human-readable description.
        final_state: Phase-space state at the end of integration.
        final_time: Integration time reached.
    """

    def __init__(self, message: str, final_state: Any, final_time: float) -> None:
        super().__init__(message)
        self.final_state = final_state
        self.final_time = final_time


class ProfileError(NumericalError):
    """The shallow-water profile could not be assembled from the orbit."""


class GluingError(NumericalError):
    """The attractor branch does not follow the perturbed flow past the switch time.

    Args:
        message: Human-readable description.
        mismatch: Largest distance to a free integration from the left limit.
    """

    def __init__(self, message: str, mismatch: float) -> None:
        super().__init__(message)
        self.mismatch = mismatch


class SweepPointError(NumericalError):
    """A single sweep point failed under the abort policy."""


# ── Output stage ──────────────────────────────────────────────────────


class OutputError(BoreforgeError):
    """Errors writing data products."""
