"""Shallow-water variable bundle assembled from a heteroclinic orbit.

The orbit (ρ, ρ′) determines the height H = e^ρ and every other shallow-water
unknown in closed form:

    U  = 4 − A/H                 U₁ = (a/μ)U
    P  = gH − 2μU′               P₁ = −μU₁′
    U₂ = U″ − U₁/H + 4U′H′/H     P₂ = (U − 4)U″ − (U′)² − μ(U‴ + U₂′)

Derivatives of ρ beyond the first come from the Liénard equation itself
(ρ″ = F − Gρ′ and its derivative), never from repeated spline differentiation.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline

from boreforge.core.landscape import Landscape
from boreforge.core.orbit import OrbitSolution
from boreforge.core.params import PhysParams, TunedConstants, tune
from boreforge.utils.errors import GridDomainError, NumericalError, ProfileError


logger = logging.getLogger(__name__)

MIN_SAMPLES: int = 4

PROFILE_COLUMNS: tuple[str, ...] = ("x", "H", "U", "U1", "U2", "P", "P1", "P2")

_REINTEGRATE_RTOL: float = 1e-12
_REINTEGRATE_ATOL: float = 1e-14


@dataclass(frozen=True, eq=False)
class ProfileBundle:
    """Shallow-water unknowns and their derivatives on a set of abscissae.

    Every attribute is an array with the shape of ``x``.  Primes are written
    ``d``/``d2``/``d3`` prefixes.
    """

    x: np.ndarray
    rho: np.ndarray
    drho: np.ndarray
    d2rho: np.ndarray
    d3rho: np.ndarray
    H: np.ndarray
    dH: np.ndarray
    d2H: np.ndarray
    U: np.ndarray
    dU: np.ndarray
    d2U: np.ndarray
    d3U: np.ndarray
    U1: np.ndarray
    dU1: np.ndarray
    U2: np.ndarray
    dU2: np.ndarray
    P: np.ndarray
    P1: np.ndarray
    P2: np.ndarray


def bundle_from_states(
    landscape: Landscape, x: np.ndarray, rho: np.ndarray, drho: np.ndarray
) -> ProfileBundle:
    """Evaluate the closed forms at phase-space states (ρ, ρ′).

    Args:
        landscape: Landscape of the parameter bundle.
        x: Abscissae the states belong to.
        rho: ρ values.
        drho: ρ′ values.

    Returns:
        The full bundle.
    """
    p = landscape.params
    A, mu, a, g = p.A, p.mu, p.a, p.g
    F, dF = landscape.F(rho), landscape.dF(rho)
    G, dG = landscape.G(rho), landscape.dG(rho)

    d2rho = F - G * drho
    d3rho = dF * drho - dG * drho**2 - G * d2rho

    H = np.exp(rho)
    dH = H * drho
    d2H = H * (d2rho + drho**2)

    w = A / H
    U = 4.0 - w
    dU = w * drho
    d2U = w * (d2rho - drho**2)
    d3U = w * (d3rho - 3.0 * drho * d2rho + drho**3)

    slip = a / mu
    U1 = slip * U
    dU1 = slip * dU
    U2 = d2U - U1 / H + 4.0 * dU * drho
    dU2 = d3U - (dU1 - U1 * drho) / H + 4.0 * (d2U * drho + dU * d2rho)

    P = g * H - 2.0 * mu * dU
    P1 = -mu * dU1
    P2 = (U - 4.0) * d2U - dU**2 - mu * (d3U + dU2)
    return ProfileBundle(
        x=np.asarray(x, dtype=float),
        rho=rho,
        drho=drho,
        d2rho=d2rho,
        d3rho=d3rho,
        H=H,
        dH=dH,
        d2H=d2H,
        U=U,
        dU=dU,
        d2U=d2U,
        d3U=d3U,
        U1=U1,
        dU1=dU1,
        U2=U2,
        dU2=dU2,
        P=P,
        P1=P1,
        P2=P2,
    )


@dataclass(frozen=True, eq=False)
class ShallowProfile:
    """Continuous samplers for the shallow-water bundle of one orbit.

    Build with :func:`build_profile`.

    Attributes:
        orbit: The source orbit.
        params: Parameter bundle (may differ from the orbit's in ε and σ only).
        tuned: Tuned constants for ``params``.
    """

    orbit: OrbitSolution
    params: PhysParams
    tuned: TunedConstants
    rho_spline: CubicHermiteSpline = field(repr=False)
    drho_spline: CubicHermiteSpline = field(repr=False)

    @property
    def landscape(self) -> Landscape:
        """Landscape of the source orbit."""
        return self.orbit.landscape

    @property
    def t_range(self) -> tuple[float, float]:
        """Domain of the samplers."""
        return self.orbit.t_range

    def _checked(self, x: Any) -> np.ndarray:
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        lo, hi = self.t_range
        span = hi - lo
        slack = 1e-12 * max(1.0, span)
        if arr.size and (arr.min() < lo - slack or arr.max() > hi + slack):
            raise GridDomainError(
                f"Requested x in [{arr.min():.6g}, {arr.max():.6g}] outside the orbit "
                f"range [{lo:.6g}, {hi:.6g}]",
            )
        return np.clip(arr, lo, hi)

    def states(self, x: Any, exact: bool = False) -> tuple[np.ndarray, np.ndarray]:
        """Phase-space state (ρ, ρ′) at ``x``.

        Args:
            x: Abscissae inside the orbit range.
            exact: When True, ``x`` must be sorted; the states are produced by
                one continuous high-accuracy integration of the Liénard field
                across ``x`` so that derivatives of different orders are
                mutually consistent.  Otherwise cubic Hermite interpolation
                of the samples is used.

        Raises:
            GridDomainError: If any x lies outside the orbit's t-range.
        """
        xs = self._checked(x)
        if not exact or xs.size < 2:
            return self.rho_spline(xs), self.drho_spline(xs)
        if np.any(np.diff(xs) <= 0):
            raise GridDomainError("Exact sampling needs strictly increasing abscissae")
        return self._reintegrate(xs)

    def _reintegrate(self, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        land = self.landscape

        def rhs(_t: float, X: np.ndarray) -> np.ndarray:
            d1, d2 = land.field(X[0], X[1])
            return np.array([d1, d2])

        # integrate away from ρ₋, the direction in which the orbit is attracting
        backward = self.orbit.chirality.iota < 0
        ordered = xs[::-1] if backward else xs
        start = ordered[0]
        y0 = np.array([float(self.rho_spline(start)), float(self.drho_spline(start))])
        sol = solve_ivp(
            rhs,
            (start, ordered[-1]),
            y0,
            method="DOP853",
            t_eval=ordered,
            rtol=_REINTEGRATE_RTOL,
            atol=_REINTEGRATE_ATOL,
        )
        if not sol.success:
            raise NumericalError(f"Profile re-integration failed: {sol.message}")
        rho, drho = sol.y
        if backward:
            rho, drho = rho[::-1], drho[::-1]
        return rho, drho

    def bundle(self, x: Any, exact: bool = False) -> ProfileBundle:
        """Full bundle at ``x`` (see :meth:`states` for ``exact``)."""
        xs = self._checked(x)
        rho, drho = self.states(xs, exact=exact)
        return bundle_from_states(self.landscape, xs, rho, drho)

    # -- The seven samplers ------------------------------------------------------

    def H(self, x: Any) -> np.ndarray:
        """Height H = e^ρ."""
        return self.bundle(x).H

    def U(self, x: Any) -> np.ndarray:
        """Depth-averaged velocity U = 4 − A/H."""
        return self.bundle(x).U

    def U1(self, x: Any) -> np.ndarray:
        """First shear correction U₁ = (a/μ)U."""
        return self.bundle(x).U1

    def U2(self, x: Any) -> np.ndarray:
        """Second shear correction U₂."""
        return self.bundle(x).U2

    def P(self, x: Any) -> np.ndarray:
        """Leading pressure P = gH − 2μU′."""
        return self.bundle(x).P

    def P1(self, x: Any) -> np.ndarray:
        """First pressure correction P₁ = −μU₁′."""
        return self.bundle(x).P1

    def P2(self, x: Any) -> np.ndarray:
        """Second pressure correction P₂."""
        return self.bundle(x).P2

    def table(self, x: Any | None = None) -> list[dict[str, float]]:
        """Rows with :data:`PROFILE_COLUMNS` at ``x`` (default: the orbit samples)."""
        xs = self.orbit.t if x is None else self._checked(x)
        b = self.bundle(xs)
        return [
            {
                "x": float(b.x[i]),
                "H": float(b.H[i]),
                "U": float(b.U[i]),
                "U1": float(b.U1[i]),
                "U2": float(b.U2[i]),
                "P": float(b.P[i]),
                "P1": float(b.P1[i]),
                "P2": float(b.P2[i]),
            }
            for i in range(len(xs))
        ]


def build_profile(orbit: OrbitSolution, params: PhysParams | None = None) -> ShallowProfile:
    """Assemble the shallow-water bundle of an orbit.

    Args:
        orbit: A converged orbit.
        params: Parameter bundle; defaults to the orbit's.  Only ε and σ may
            differ from the orbit's parameters since the profile does not
            depend on them.

    Returns:
        The profile.

    Raises:
        ProfileError: If the orbit has too few samples for spline
            construction or the parameters disagree with the orbit.
    """
    params = params or orbit.params
    base = orbit.params
    if (params.mu, params.a, params.g, params.A) != (base.mu, base.a, base.g, base.A):
        raise ProfileError("Profile parameters (mu, a, g, A) must match the orbit's")
    if len(orbit.t) < MIN_SAMPLES:
        raise ProfileError(
            f"Orbit has {len(orbit.t)} samples; at least {MIN_SAMPLES} are needed",
        )
    if np.any(np.diff(orbit.t) <= 0):
        raise ProfileError("Orbit sample times are not strictly increasing")
    try:
        rho_spline = CubicHermiteSpline(orbit.t, orbit.rho, orbit.rho_prime)
        drho_spline = CubicHermiteSpline(orbit.t, orbit.rho_prime, orbit.rho_second)
    except ValueError as exc:
        raise ProfileError(f"Spline construction failed: {exc}") from exc

    profile = ShallowProfile(
        orbit=orbit,
        params=params,
        tuned=tune(params),
        rho_spline=rho_spline,
        drho_spline=drho_spline,
    )
    logger.info("Profile built samples=%d t_range=(%.4g, %.4g)", len(orbit.t), *orbit.t_range)
    return profile


# -- Verification --------------------------------------------------------------


def mass_residual(bundle: ProfileBundle, A: float) -> np.ndarray:
    """(4 − U)·H − A, identically zero by construction."""
    return (4.0 - bundle.U) * bundle.H - A


def momentum_residual(bundle: ProfileBundle, params: PhysParams) -> np.ndarray:
    """H(U − 4)U′ + aU − 4μ(HU′)′ + gHH′ − 4aH."""
    b, p = bundle, params
    dHU = b.dH * b.dU + b.H * b.d2U
    return b.H * (b.U - 4.0) * b.dU + p.a * b.U - 4.0 * p.mu * dHU + p.g * b.H * b.dH - 4.0 * p.a * b.H


@dataclass(frozen=True)
class LienardReport:
    """Residuals of the one-dimensional systems along a profile.

    Attributes:
        h_form: sup |4μA(H′/H)′ − 4a(1 − H − A/4H) + (A²/H² − gH)H′|.
        momentum: sup of the shallow-water momentum residual.
        mass: sup |(4 − U)H − A|.
        points: Number of evaluation points.
    """

    h_form: float
    momentum: float
    mass: float
    points: int

    def passed(self, h_tol: float = 1e-5, momentum_tol: float = 1e-5) -> bool:
        """Whether every residual is inside its tolerance."""
        return self.h_form <= h_tol and self.momentum <= momentum_tol and self.mass <= 1e-12


def h_form_residual(profile: ShallowProfile, x: np.ndarray) -> np.ndarray:
    """H-form residual evaluated by spline differentiation.

    H′/H is the interpolated ρ′ and (H′/H)′ the derivative of that spline.
    """
    p = profile.params
    xs = profile._checked(x)
    rho = profile.rho_spline(xs)
    log_slope = profile.drho_spline(xs)
    log_curv = profile.drho_spline.derivative()(xs)
    H = np.exp(rho)
    dH = H * log_slope
    A = p.A
    return (
        4.0 * p.mu * A * log_curv
        - 4.0 * p.a * (1.0 - H - A / (4.0 * H))
        + (A * A / (H * H) - p.g * H) * dH
    )


def verify_lienard_equivalence(profile: ShallowProfile) -> LienardReport:
    """Check the H-form ODE, the momentum equation and the mass equation.

    Residuals are evaluated at the orbit samples and at the midpoints between
    them; the midpoints are where spline differentiation is not exact.
    """
    t = profile.orbit.t
    xs = np.sort(np.concatenate([t, 0.5 * (t[:-1] + t[1:])]))
    b = profile.bundle(xs)
    report = LienardReport(
        h_form=float(np.max(np.abs(h_form_residual(profile, xs)))),
        momentum=float(np.max(np.abs(momentum_residual(b, profile.params)))),
        mass=float(np.max(np.abs(mass_residual(b, profile.params.A)))),
        points=len(xs),
    )
    logger.debug(
        "Lienard check h_form=%.3e momentum=%.3e mass=%.3e",
        report.h_form,
        report.momentum,
        report.mass,
    )
    return report


@dataclass(frozen=True)
class LimitCheck:
    """One end-state limit of a profile variable."""

    name: str
    end: str
    expected: float
    actual: float

    @property
    def error(self) -> float:
        """Absolute deviation."""
        return abs(self.actual - self.expected)


def expected_limits(params: PhysParams, H: float) -> dict[str, float]:
    """Far-field values of the bundle at a constant height H."""
    slip = params.a / params.mu
    U = 4.0 - params.A / H
    return {
        "H": H,
        "U": U,
        "U1": slip * U,
        "U2": -slip * (4.0 / H - params.A / (H * H)),
        "P": params.g * H,
        "P1": 0.0,
        "P2": 0.0,
    }


def end_limits(profile: ShallowProfile) -> list[LimitCheck]:
    """Compare the bundle at both trajectory endpoints with its far-field limits."""
    lo, hi = profile.t_range
    b = profile.bundle(np.array([lo, hi]))
    checks: list[LimitCheck] = []
    for index, (end, rho_limit) in enumerate(zip(("left", "right"), profile.orbit.rho_limits, strict=True)):
        expected = expected_limits(profile.params, math.exp(rho_limit))
        for name, value in expected.items():
            actual = float(getattr(b, name)[index])
            checks.append(LimitCheck(name=name, end=end, expected=value, actual=actual))
    return checks


@dataclass(frozen=True)
class BoundsReport:
    """Pointwise bounds of a profile.

    Attributes:
        h_min: min H over the samples.
        h_max: max H over the samples.
        u_max: max U over the samples.
        gap_min: inf(4 − U) over the samples.
        h_floor: H₋.
        h_ceiling: e^{ρ⋆}.
        gap_floor: A/e^{ρ⋆}.
    """

    h_min: float
    h_max: float
    u_max: float
    gap_min: float
    h_floor: float
    h_ceiling: float
    gap_floor: float

    def holds(self, tol: float = 1e-6) -> bool:
        """Whether H ∈ [H₋, e^{ρ⋆}], U < 4 and inf(4 − U) ≥ A/e^{ρ⋆}, up to ``tol``."""
        return (
            self.h_min >= self.h_floor - tol
            and self.h_max <= self.h_ceiling + tol
            and self.u_max < 4.0
            and self.gap_min >= self.gap_floor - tol
        )


def profile_bounds(profile: ShallowProfile) -> BoundsReport:
    """Evaluate the height and velocity bounds over the orbit samples."""
    b = profile.bundle(profile.orbit.t)
    land = profile.landscape
    ceiling = math.exp(land.rho_star)
    return BoundsReport(
        h_min=float(b.H.min()),
        h_max=float(b.H.max()),
        u_max=float(b.U.max()),
        gap_min=float((4.0 - b.U).min()),
        h_floor=land.eq.h_minus,
        h_ceiling=ceiling,
        gap_floor=profile.params.A / ceiling,
    )
