"""Liénard landscape of the log-height bore equation.

The bore profile in log-height variables ρ = log H solves
ρ″ = F(ρ) − G(ρ)ρ′ with a conservative force F, a state-dependent
damping G, and a potential V with V′ = −F.  This module evaluates those
functions in closed form, locates the equipotential point ρ⋆ and the
dissipation root ρ₀, classifies (g, A) into the ebbing, surging and
excluded regions, and describes the trapping region used by the shooter.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
from scipy.optimize import brentq

from boreforge.core.params import Equilibria, PhysParams, equilibria
from boreforge.utils.errors import BracketError, ParameterError


logger = logging.getLogger(__name__)

_MAX_DOUBLINGS: int = 64
_ROOT_XTOL: float = 1e-13
_ROOT_VTOL: float = 1e-12


class Region(Enum):
    """Parameter regions of the (g, A) plane."""

    C1 = "C1"
    """g < A²e^{−3ρ⋆}: damping positive on the trapping interval (ebbing bores)."""

    CMINUS1 = "Cminus1"
    """g > A²e^{−3ρ₋}: damping negative on the trapping interval (surging bores)."""

    EXCLUDED = "Excluded"
    """Neither strict inequality holds; no bore is constructed."""

    @property
    def label(self) -> str:
        """Human-readable label used on stdout."""
        return {
            Region.C1: "C1 (ebbing)",
            Region.CMINUS1: "Cminus1 (surging)",
            Region.EXCLUDED: "Excluded",
        }[self]


class Chirality(Enum):
    """Direction of the heteroclinic connection."""

    EBBING = 1
    SURGING = -1
    EXCLUDED = 0

    @property
    def iota(self) -> int:
        """The signed chirality ι (0 for excluded parameters)."""
        return int(self.value)

    @classmethod
    def from_region(cls, region: Region) -> Chirality:
        """Map a parameter region onto the chirality it produces."""
        return {
            Region.C1: cls.EBBING,
            Region.CMINUS1: cls.SURGING,
            Region.EXCLUDED: cls.EXCLUDED,
        }[region]


@dataclass(frozen=True)
class Classification:
    """Region membership of a (g, A) pair.

    Attributes:
        g: Vertical gravity classified.
        A: Flux parameter classified.
        region: The region containing (g, A).
        g_lower: Ebbing iff g < g_lower (= A²e^{−3ρ⋆}).
        g_upper: Surging iff g > g_upper (= A²e^{−3ρ₋}).
    """

    g: float
    A: float
    region: Region
    g_lower: float
    g_upper: float

    @property
    def chirality(self) -> Chirality:
        """Chirality of bores for this pair."""
        return Chirality.from_region(self.region)


@dataclass(frozen=True)
class BoundaryRow:
    """One row of the region boundary curves."""

    A: float
    g_lower: float
    g_upper: float


# -- Closed-form potential ------------------------------------------------------


def _potential_shape(x: Any, A: float, eq: Equilibria) -> Any:
    """∫_{ρ₋}^{x} (1 − eˢ − (A/4)e⁻ˢ) ds, the potential without its −a/(μA) prefactor."""
    return (x - eq.rho_minus) - (np.exp(x) - eq.h_minus) + 0.25 * A * (
        np.exp(-x) - 1.0 / eq.h_minus
    )


@functools.lru_cache(maxsize=4096)
def rho_star_of(A: float) -> float:
    """Equipotential point ρ⋆(A) > ρ₊ where the potential returns to zero.

    The potential's zero set does not depend on (μ, a, g), so the root is
    cached per A.

    Raises:
        BracketError: If 64 span doublings fail to bracket a sign change.
    """
    eq = equilibria(A)

    def shape(x: float) -> float:
        return float(_potential_shape(x, A, eq))

    lo = eq.rho_plus
    span = 1.0
    for _ in range(_MAX_DOUBLINGS):
        hi = lo + span
        if shape(hi) < 0.0:  # V > 0 past ρ⋆ means shape < 0
            break
        span *= 2.0
    else:
        raise BracketError(f"No sign change for the potential beyond rho_plus at A={A!r}")

    root, info = brentq(shape, lo, hi, xtol=_ROOT_XTOL, maxiter=500, full_output=True)
    if not info.converged:
        raise BracketError(f"Brent iteration did not converge for rho_star at A={A!r}")
    return float(root)


def find_rho_star(params: PhysParams) -> float:
    """Locate ρ⋆ for a parameter bundle.

    Args:
        params: A validated parameter bundle.

    Returns:
        ρ⋆ with V(ρ⋆) = 0 to 1e-12 and ρ⋆ > ρ₊.

    Raises:
        BracketError: If the bracket cannot be established.
    """
    rho_star = rho_star_of(params.A)
    scale = params.a / (params.mu * params.A)
    eq = equilibria(params.A)
    v = -scale * float(_potential_shape(rho_star, params.A, eq))
    if abs(v) > _ROOT_VTOL * max(1.0, scale):
        logger.warning("rho_star potential residual above tolerance v=%.3e", v)
    return rho_star


def classify(g: float, A: float) -> Classification:
    """Classify (g, A) into the ebbing, surging or excluded region.

    Points on a boundary (equality) classify as excluded.

    Args:
        g: Vertical gravity, ≥ 0.
        A: Flux parameter in (0, 1).

    Returns:
        The classification with both boundary values.

    Raises:
        ParameterError: If g < 0 or A is outside (0, 1).
    """
    if g < 0 or not math.isfinite(g):
        raise ParameterError(f"g must be nonnegative and finite, got {g!r}")
    eq = equilibria(A)
    g_lower = A * A * math.exp(-3.0 * rho_star_of(A))
    g_upper = A * A / eq.h_minus**3
    if g < g_lower:
        region = Region.C1
    elif g > g_upper:
        region = Region.CMINUS1
    else:
        region = Region.EXCLUDED
    return Classification(g=g, A=A, region=region, g_lower=g_lower, g_upper=g_upper)


def region_boundary_curve(A_samples: list[float]) -> list[BoundaryRow]:
    """Emit the two boundary curves g = A²e^{−3ρ⋆(A)} and g = A²e^{−3ρ₋(A)}.

    Args:
        A_samples: Flux parameters in (0, 1).

    Returns:
        One row per sample, in input order.
    """
    rows: list[BoundaryRow] = []
    for A in A_samples:
        c = classify(0.0, A)
        rows.append(BoundaryRow(A=A, g_lower=c.g_lower, g_upper=c.g_upper))
    return rows


# -- Landscape -------------------------------------------------------------------


@dataclass(frozen=True)
class TrapRegion:
    """Compact set {ρ₋ ≤ x₁ ≤ ρ⋆, |x₂| ≤ v_cap(x₁)} of the phase plane."""

    x_lo: float
    x_hi: float
    landscape: Landscape

    def v_cap(self, x: Any) -> Any:
        """Maximal speed √(−2V(x)) on [ρ₋, ρ⋆]; arguments are clamped into it."""
        return self.landscape.v_cap(x)

    def violation(self, x1: Any, x2: Any) -> Any:
        """Pointwise max(ρ₋ − x₁, x₁ − ρ⋆, |x₂| − v_cap(clamp x₁))."""
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        return np.maximum.reduce(
            [self.x_lo - x1, x1 - self.x_hi, np.abs(x2) - self.v_cap(x1)],
        )

    def contains(self, x1: float, x2: float, tol: float = 0.0) -> bool:
        """Whether (x₁, x₂) lies in the region up to ``tol``."""
        return bool(self.violation(x1, x2) <= tol)


@dataclass(frozen=True)
class Landscape:
    """Closed-form Liénard functions for one parameter bundle.

    Build with :meth:`Landscape.build`.

    Attributes:
        params: The parameter bundle.
        eq: End-state heights and logs.
        rho_star: Equipotential point ρ⋆.
        rho_zero: Dissipation root ρ₀ = log(A²/g)/3, ``None`` when g = 0.
        classification: Region membership of (g, A).
    """

    params: PhysParams
    eq: Equilibria
    rho_star: float
    rho_zero: float | None
    classification: Classification

    @classmethod
    def build(cls, params: PhysParams) -> Landscape:
        """Construct the landscape for ``params``."""
        eq = equilibria(params.A)
        rho_zero = None if params.g == 0.0 else math.log(params.A**2 / params.g) / 3.0
        landscape = cls(
            params=params,
            eq=eq,
            rho_star=find_rho_star(params),
            rho_zero=rho_zero,
            classification=classify(params.g, params.A),
        )
        logger.debug(
            "Landscape built A=%.6g g=%.6g rho_star=%.6g region=%s",
            params.A,
            params.g,
            landscape.rho_star,
            landscape.classification.region.value,
        )
        return landscape

    @property
    def chirality(self) -> Chirality:
        """Chirality of the distinguished orbit."""
        return self.classification.chirality

    @property
    def trap(self) -> TrapRegion:
        """The trapping region R̄."""
        return TrapRegion(x_lo=self.eq.rho_minus, x_hi=self.rho_star, landscape=self)

    @property
    def _force_scale(self) -> float:
        return self.params.a / (self.params.mu * self.params.A)

    def F(self, x: Any) -> Any:
        """F(x) = (a/μA)(1 − eˣ − (A/4)e⁻ˣ)."""
        return self._force_scale * (1.0 - np.exp(x) - 0.25 * self.params.A * np.exp(-x))

    def dF(self, x: Any) -> Any:
        """F′(x) = (a/μA)(−eˣ + (A/4)e⁻ˣ)."""
        return self._force_scale * (-np.exp(x) + 0.25 * self.params.A * np.exp(-x))

    def G(self, x: Any) -> Any:
        """G(x) = (1/4μ)(Ae⁻ˣ − (g/A)e^{2x})."""
        p = self.params
        return (p.A * np.exp(-x) - (p.g / p.A) * np.exp(2.0 * x)) / (4.0 * p.mu)

    def dG(self, x: Any) -> Any:
        """G′(x) = −(Ae⁻ˣ + (2g/A)e^{2x})/(4μ)."""
        p = self.params
        return -(p.A * np.exp(-x) + 2.0 * (p.g / p.A) * np.exp(2.0 * x)) / (4.0 * p.mu)

    def V(self, x: Any) -> Any:
        """Potential V(x) = −∫_{ρ₋}^{x} F, in closed form."""
        return -self._force_scale * _potential_shape(x, self.params.A, self.eq)

    def v_cap(self, x: Any) -> Any:
        """√(−2V) with x clamped into [ρ₋, ρ⋆]."""
        clamped = np.clip(x, self.eq.rho_minus, self.rho_star)
        return np.sqrt(np.maximum(-2.0 * self.V(clamped), 0.0))

    def field(self, x1: Any, x2: Any) -> tuple[Any, Any]:
        """Liénard vector field Φ(x₁, x₂) = (x₂, F(x₁) − x₂G(x₁))."""
        return x2, self.F(x1) - x2 * self.G(x1)


def sample_table(landscape: Landscape, n: int = 201, pad: float = 0.25) -> list[dict[str, float]]:
    """Tabulate (x, F, G, V) on [ρ₋ − pad, ρ⋆ + pad]."""
    xs = np.linspace(landscape.eq.rho_minus - pad, landscape.rho_star + pad, n)
    F, G, V = landscape.F(xs), landscape.G(xs), landscape.V(xs)
    return [
        {"x": float(x), "F": float(f), "G": float(g), "V": float(v)}
        for x, f, g, v in zip(xs, F, G, V, strict=True)
    ]


def phase_portrait(landscape: Landscape, n: int = 25, pad: float = 0.15) -> list[dict[str, float]]:
    """Sample the Liénard field on a box around the trapping region.

    Returns:
        Rows with columns x1, x2, dx1, dx2, inside_trap (1.0 or 0.0).
    """
    lo, hi = landscape.eq.rho_minus, landscape.rho_star
    width = hi - lo
    vmax = float(np.max(landscape.v_cap(np.linspace(lo, hi, 401))))
    xs = np.linspace(lo - pad * width, hi + pad * width, n)
    vs = np.linspace(-(1.0 + pad) * vmax, (1.0 + pad) * vmax, n)
    X1, X2 = np.meshgrid(xs, vs, indexing="ij")
    D1, D2 = landscape.field(X1, X2)
    inside = landscape.trap.violation(X1, X2) <= 0.0
    return [
        {
            "x1": float(x1),
            "x2": float(x2),
            "dx1": float(d1),
            "dx2": float(d2),
            "inside_trap": 1.0 if flag else 0.0,
        }
        for x1, x2, d1, d2, flag in zip(
            X1.ravel(), X2.ravel(), D1.ravel(), D2.ravel(), inside.ravel(), strict=True
        )
    ]
