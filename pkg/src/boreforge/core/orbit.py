"""Distinguished heteroclinic orbits of the Liénard bore equation.

Computes the linear character of the two equilibria (ρ₋, 0) and (ρ₊, 0),
shoots the unstable (ebbing) or stable (surging, via time reversal)
manifold of the saddle (ρ₋, 0) into the trapping region, and post-processes
the trajectory: translation anchoring, exponential tail fits, energy audits
and the shape diagnostics used for monotone/oscillatory classification.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq
from scipy.stats import linregress

from boreforge.core.landscape import Chirality, Landscape
from boreforge.core.params import PhysParams
from boreforge.utils.errors import (
    ExcludedRegionError,
    NumericalError,
    SlowConvergenceError,
    SpectrumError,
    TrappingBreachError,
)


logger = logging.getLogger(__name__)


class EquilibriumSite(Enum):
    """The two equilibria of the Liénard system."""

    RHO_MINUS = "rho_minus"
    RHO_PLUS = "rho_plus"


class Character(Enum):
    """Linear character of an equilibrium."""

    HYPERBOLIC = "hyperbolic"
    SINK = "sink"
    SOURCE = "source"


class ProfileShape(Enum):
    """Qualitative shape of the bore profile near its ρ₊ end state."""

    MONOTONE = "monotone"
    OSCILLATORY = "oscillatory"


@dataclass(frozen=True, eq=False)
class EquilibriumSpectrum:
    """Eigen-data of the linearized field at one equilibrium.

    Attributes:
        at: Which equilibrium.
        location: The phase-space point (ρ, 0).
        jacobian: DΦ at the equilibrium, [[0, 1], [F′, −G]].
        lambda_minus: (−G − √(G² + 4F′))/2.
        lambda_plus: (−G + √(G² + 4F′))/2.
        tangent_unstable: (1, λ₊) when the eigenvalues are real, else ``None``.
        tangent_stable: (1, λ₋) when the eigenvalues are real, else ``None``.
        character: Hyperbolic saddle, sink or source.
    """

    at: EquilibriumSite
    location: np.ndarray
    jacobian: np.ndarray
    lambda_minus: complex
    lambda_plus: complex
    tangent_unstable: np.ndarray | None
    tangent_stable: np.ndarray | None
    character: Character

    @property
    def is_real(self) -> bool:
        """Whether both eigenvalues are real."""
        return self.lambda_minus.imag == 0.0 and self.lambda_plus.imag == 0.0

    @property
    def slowest_rate(self) -> float:
        """Smallest |Re λ|, the asymptotic exponential rate of approach."""
        return min(abs(self.lambda_minus.real), abs(self.lambda_plus.real))


@dataclass(frozen=True)
class ShootOpts:
    """Options of the manifold shooter.

    Attributes:
        seed_offset: Distance δ of the seed from (ρ₋, 0) along the eigenvector.
        terminal_tol: Phase-space distance to (ρ₊, 0) that ends integration.
        max_time: Integration time budget.
        rtol: Relative tolerance of the embedded Runge-Kutta pair.
        atol: Absolute tolerance of the embedded Runge-Kutta pair.
        sample_spacing: Maximal t-spacing of the emitted samples.
        trap_tol: Trapping violation that aborts the shot.
        method: ``solve_ivp`` method name.
    """

    seed_offset: float = 1e-8
    terminal_tol: float = 1e-9
    max_time: float = 1e4
    rtol: float = 1e-10
    atol: float = 1e-12
    sample_spacing: float = 0.05
    trap_tol: float = 1e-4
    method: str = "RK45"


@dataclass(frozen=True)
class TailFit:
    """Log-linear fit of the distance to an end state.

    Attributes:
        rate: Fitted exponential rate (> 0 for a converging tail).
        r_squared: Coefficient of determination of the fit.
        samples: Number of samples used.
    """

    rate: float
    r_squared: float
    samples: int


@dataclass(frozen=True, eq=False)
class OrbitSolution:
    """A sampled heteroclinic trajectory t ↦ (ρ(t), ρ′(t)).

    Attributes:
        landscape: The landscape the orbit was shot in.
        chirality: Ebbing (+1) or surging (−1).
        t: Increasing sample times, anchored so the mid-height crossing is at 0.
        rho: ρ at the samples.
        rho_prime: ρ′ at the samples.
        rho_limits: (ρ at −∞, ρ at +∞).
        anchor: Unshifted integration time of the mid-height crossing.
        decay_rate: min of the two fitted tail rates (α).
        tails: Tail fits at the −∞ and +∞ ends.
        trap_violation: Max over samples of the trapping violation.
        seed_offset: Seed distance used.
    """

    landscape: Landscape
    chirality: Chirality
    t: np.ndarray
    rho: np.ndarray
    rho_prime: np.ndarray
    rho_limits: tuple[float, float]
    anchor: float
    decay_rate: float
    tails: tuple[TailFit, TailFit]
    trap_violation: float
    seed_offset: float
    _spline: Any = field(default=None, repr=False)

    @property
    def params(self) -> PhysParams:
        """Parameter bundle of the orbit."""
        return self.landscape.params

    @property
    def t_range(self) -> tuple[float, float]:
        """(first, last) sample time."""
        return float(self.t[0]), float(self.t[-1])

    @property
    def states(self) -> np.ndarray:
        """Samples as an (n, 2) array of (ρ, ρ′)."""
        return np.column_stack([self.rho, self.rho_prime])

    @property
    def decay_r2(self) -> float:
        """Worst R² of the two tail fits."""
        return min(self.tails[0].r_squared, self.tails[1].r_squared)

    @property
    def rho_second(self) -> np.ndarray:
        """ρ″ = F(ρ) − G(ρ)ρ′ at the samples."""
        return self.landscape.F(self.rho) - self.landscape.G(self.rho) * self.rho_prime

    def interpolant(self) -> CubicHermiteSpline:
        """C¹ Hermite interpolant of the phase-space state, derivative Φ(X)."""
        if self._spline is None:
            d1, d2 = self.landscape.field(self.rho, self.rho_prime)
            spline = CubicHermiteSpline(
                self.t, self.states, np.column_stack([d1, d2]), axis=0
            )
            object.__setattr__(self, "_spline", spline)
        return self._spline

    def metadata(self) -> dict[str, Any]:
        """JSON metadata block of the orbit dump."""
        return {
            "chirality": self.chirality.name.lower(),
            "iota": self.chirality.iota,
            "rho_limits": [self.rho_limits[0], self.rho_limits[1]],
            "anchor": self.anchor,
            "decay_rate": self.decay_rate,
            "decay_r2": self.decay_r2,
            "trap_violation": self.trap_violation,
            "seed_offset": self.seed_offset,
            "samples": len(self.t),
        }


# -- Linearization ------------------------------------------------------------------


def jacobian(landscape: Landscape, x: float) -> np.ndarray:
    """DΦ at (x, 0): [[0, 1], [F′(x), −G(x)]]."""
    return np.array([[0.0, 1.0], [float(landscape.dF(x)), -float(landscape.G(x))]])


def linearize(at: EquilibriumSite, landscape: Landscape) -> EquilibriumSpectrum:
    """Eigen-data at (ρ₋, 0) or (ρ₊, 0).

    Args:
        at: The equilibrium.
        landscape: The landscape of the parameter bundle.

    Returns:
        The spectrum with the eigenvalues λ± = (−G ± √(G² + 4F′))/2.

    Raises:
        SpectrumError: If (ρ₋, 0) is not a real saddle obeying the eigenvalue
            bounds, or if G(ρ₊) = 0 makes (ρ₊, 0) a degenerate center.
    """
    x = landscape.eq.rho_minus if at is EquilibriumSite.RHO_MINUS else landscape.eq.rho_plus
    G = float(landscape.G(x))
    dF = float(landscape.dF(x))
    disc = G * G + 4.0 * dF
    root = math.sqrt(disc) if disc >= 0.0 else cmath.sqrt(disc)
    lam_minus = complex((-G - root) / 2.0)
    lam_plus = complex((-G + root) / 2.0)
    real = disc >= 0.0

    if at is EquilibriumSite.RHO_MINUS:
        if not real:
            raise SpectrumError(f"Complex eigenvalues at rho_minus (disc={disc:.3e})")
        character = Character.HYPERBOLIC
        bound = math.sqrt(dF)
        if G > 0 and not (lam_minus.real < -bound and lam_plus.real < bound):
            raise SpectrumError("Eigenvalue bounds violated at rho_minus for G > 0")
        if G < 0 and not (lam_minus.real > -bound and lam_plus.real > bound):
            raise SpectrumError("Eigenvalue bounds violated at rho_minus for G < 0")
    elif G > 0:
        character = Character.SINK
    elif G < 0:
        character = Character.SOURCE
    else:
        raise SpectrumError("G(rho_plus) = 0: degenerate equilibrium, neither sink nor source")

    return EquilibriumSpectrum(
        at=at,
        location=np.array([x, 0.0]),
        jacobian=jacobian(landscape, x),
        lambda_minus=lam_minus,
        lambda_plus=lam_plus,
        tangent_unstable=np.array([1.0, lam_plus.real]) if real else None,
        tangent_stable=np.array([1.0, lam_minus.real]) if real else None,
        character=character,
    )


def profile_shape(landscape: Landscape) -> ProfileShape:
    """Oscillatory iff the ρ₊ eigenvalues are complex."""
    spectrum = linearize(EquilibriumSite.RHO_PLUS, landscape)
    return ProfileShape.MONOTONE if spectrum.is_real else ProfileShape.OSCILLATORY


# -- Shooting ----------------------------------------------------------------------


def _refine_times(nodes: np.ndarray, spacing: float) -> np.ndarray:
    """Insert points so consecutive times are at most ``spacing`` apart."""
    pieces = [nodes[:1]]
    for left, right in zip(nodes[:-1], nodes[1:], strict=True):
        count = max(1, math.ceil((right - left) / spacing))
        pieces.append(np.linspace(left, right, count + 1)[1:])
    return np.concatenate(pieces)


def _tail_fit(
    t: np.ndarray,
    states: np.ndarray,
    jac: np.ndarray,
    location: np.ndarray,
    window: tuple[float, float],
    growing: bool,
) -> TailFit:
    """Fit log d(t) ≈ c ± αt where d = max |eigen-coordinates of X − X*|."""
    _, vecs = np.linalg.eig(jac)
    coords = np.linalg.solve(vecs, (states - location).T)
    dist = np.max(np.abs(coords), axis=0)
    lo, hi = window
    mask = (dist >= lo) & (dist <= hi)
    if np.count_nonzero(mask) < 5:
        mask = (dist > 0.0) & (dist <= 1e-2)
    if np.count_nonzero(mask) < 3:
        raise NumericalError("Too few tail samples for a decay fit")
    fit = linregress(t[mask], np.log(dist[mask]))
    rate = float(fit.slope) if growing else -float(fit.slope)
    return TailFit(rate=rate, r_squared=float(fit.rvalue**2), samples=int(np.count_nonzero(mask)))


def _mid_crossing(spline: CubicHermiteSpline, t: np.ndarray, rho: np.ndarray, mid: float,
                  from_start: bool) -> float:
    """First time ρ crosses ``mid`` scanning from the ρ₋ side."""
    above = rho >= mid
    indices = np.flatnonzero(above)
    if indices.size == 0:
        raise NumericalError("Orbit never crosses the mid-height level")
    if from_start:
        k = int(indices[0])
        left, right = k - 1, k
    else:
        k = int(indices[-1])
        left, right = k, k + 1
    if left < 0 or right >= len(t):
        return float(t[k])
    return float(brentq(lambda s: float(spline(s)[0]) - mid, t[left], t[right], xtol=1e-14))


def shoot_heteroclinic(
    params: PhysParams,
    landscape: Landscape | None = None,
    opts: ShootOpts | None = None,
) -> OrbitSolution:
    """Shoot the distinguished heteroclinic orbit.

    Ebbing parameters integrate the unstable manifold of (ρ₋, 0) forward into
    the sink (ρ₊, 0).  Surging parameters integrate the stable manifold of
    (ρ₋, 0) under the time-reversed field and reverse the samples.

    Args:
        params: A validated parameter bundle.
        landscape: Precomputed landscape for ``params`` (built if omitted).
        opts: Shooter options.

    Returns:
        The anchored orbit with tail diagnostics.

    Raises:
        ExcludedRegionError: If (g, A) is in the Excluded region.
        TrappingBreachError: If the trajectory leaves the trapping region.
        SlowConvergenceError: If the terminal ball is not reached in time.
    """
    landscape = landscape or Landscape.build(params)
    opts = opts or ShootOpts()
    chirality = landscape.chirality
    if chirality is Chirality.EXCLUDED:
        c = landscape.classification
        raise ExcludedRegionError(
            f"(g, A)=({params.g!r}, {params.A!r}) is Excluded: "
            f"ebbing needs g < {c.g_lower:.10g}, surging needs g > {c.g_upper:.10g}",
            g_lower=c.g_lower,
            g_upper=c.g_upper,
        )

    saddle = linearize(EquilibriumSite.RHO_MINUS, landscape)
    target_spectrum = linearize(EquilibriumSite.RHO_PLUS, landscape)
    iota = chirality.iota
    tangent = saddle.tangent_unstable if iota == 1 else saddle.tangent_stable
    assert tangent is not None  # real at rho_minus by linearize
    direction = tangent / np.linalg.norm(tangent)
    seed = saddle.location + opts.seed_offset * direction
    target = target_spectrum.location
    trap = landscape.trap
    sign = float(iota)

    def rhs(_s: float, X: np.ndarray) -> np.ndarray:
        d1, d2 = landscape.field(X[0], X[1])
        return sign * np.array([d1, d2])

    def arrived(_s: float, X: np.ndarray) -> float:
        return float(np.hypot(X[0] - target[0], X[1] - target[1]) - opts.terminal_tol)

    def escaped(_s: float, X: np.ndarray) -> float:
        return float(trap.violation(X[0], X[1])) - opts.trap_tol

    arrived.terminal = True  # type: ignore[attr-defined]
    arrived.direction = -1  # type: ignore[attr-defined]
    escaped.terminal = True  # type: ignore[attr-defined]
    escaped.direction = 1  # type: ignore[attr-defined]

    sol = solve_ivp(
        rhs,
        (0.0, opts.max_time),
        seed,
        method=opts.method,
        rtol=opts.rtol,
        atol=opts.atol,
        events=[arrived, escaped],
        dense_output=True,
    )
    if sol.status == -1:
        raise NumericalError(f"Integrator failure: {sol.message}")
    if len(sol.t_events[1]) > 0:
        state = sol.y[:, -1]
        violation = float(trap.violation(state[0], state[1]))
        raise TrappingBreachError(
            f"Trajectory left the trapping region at s={sol.t[-1]:.6g} "
            f"(violation={violation:.3e})",
            violation=violation,
        )
    if len(sol.t_events[0]) == 0:
        raise SlowConvergenceError(
            f"Terminal ball not reached within max_time={opts.max_time:g}",
            final_state=sol.y[:, -1].copy(),
            final_time=float(sol.t[-1]),
        )

    s = _refine_times(sol.t, opts.sample_spacing)
    X = sol.sol(s).T
    X[0], X[-1] = sol.y[:, 0], sol.y[:, -1]
    if iota == 1:
        t = s
    else:
        t = -s[::-1]
        X = X[::-1].copy()

    violation = float(np.max(trap.violation(X[:, 0], X[:, 1])))
    if violation > opts.trap_tol:
        raise TrappingBreachError(
            f"Trapping violation {violation:.3e} exceeds {opts.trap_tol:g}",
            violation=violation,
        )

    d1, d2 = landscape.field(X[:, 0], X[:, 1])
    spline = CubicHermiteSpline(t, X, np.column_stack([d1, d2]), axis=0)
    mid = 0.5 * (landscape.eq.rho_minus + landscape.eq.rho_plus)
    anchor = _mid_crossing(spline, t, X[:, 0], mid, from_start=iota == 1)
    t = t - anchor

    minus_site, plus_site = saddle, target_spectrum
    left_site, right_site = (minus_site, plus_site) if iota == 1 else (plus_site, minus_site)
    left_window = (10.0 * opts.seed_offset, 1e-4) if iota == 1 else (10.0 * opts.terminal_tol, 1e-5)
    right_window = (10.0 * opts.terminal_tol, 1e-5) if iota == 1 else (10.0 * opts.seed_offset, 1e-4)
    tails = (
        _tail_fit(t, X, left_site.jacobian, left_site.location, left_window, growing=True),
        _tail_fit(t, X, right_site.jacobian, right_site.location, right_window, growing=False),
    )

    eq = landscape.eq
    limits = (eq.rho_minus, eq.rho_plus) if iota == 1 else (eq.rho_plus, eq.rho_minus)
    orbit = OrbitSolution(
        landscape=landscape,
        chirality=chirality,
        t=t,
        rho=X[:, 0].copy(),
        rho_prime=X[:, 1].copy(),
        rho_limits=limits,
        anchor=anchor,
        decay_rate=min(tails[0].rate, tails[1].rate),
        tails=tails,
        trap_violation=violation,
        seed_offset=opts.seed_offset,
    )
    logger.info(
        "Orbit converged chirality=%s samples=%d t_range=(%.4g, %.4g) decay_rate=%.6g",
        chirality.name.lower(),
        len(t),
        t[0],
        t[-1],
        orbit.decay_rate,
    )
    return orbit


def stationary_orbit(
    landscape: Landscape,
    at: EquilibriumSite = EquilibriumSite.RHO_PLUS,
    t_range: tuple[float, float] = (-10.0, 10.0),
    samples: int = 201,
) -> OrbitSolution:
    """Constant trajectory sitting at an equilibrium (the trivial bore)."""
    x = landscape.eq.rho_minus if at is EquilibriumSite.RHO_MINUS else landscape.eq.rho_plus
    t = np.linspace(t_range[0], t_range[1], samples)
    chirality = landscape.chirality
    return OrbitSolution(
        landscape=landscape,
        chirality=chirality,
        t=t,
        rho=np.full(samples, x),
        rho_prime=np.zeros(samples),
        rho_limits=(x, x),
        anchor=0.0,
        decay_rate=math.inf,
        tails=(TailFit(math.inf, 1.0, 0), TailFit(math.inf, 1.0, 0)),
        trap_violation=float(np.max(landscape.trap.violation(np.full(samples, x), 0.0))),
        seed_offset=0.0,
    )


# -- Diagnostics ---------------------------------------------------------------------


@dataclass(frozen=True)
class EnergyAudit:
    """Discrete check of the energy law E′ = −G(ρ)ρ′² with E = ½ρ′² + V(ρ).

    Attributes:
        defect: max over sample intervals of |ΔE + ∫Gρ′²| relative to ∫|G|ρ′².
        e_start: E at the first sample.
        e_end: E at the last sample.
        dissipation: ∫Gρ′² over the whole orbit.
        bound_lhs: √|G(ρ_ref)|·‖ρ′‖_L² + ‖ρ′‖_∞ with ρ_ref = ρ⋆ (ebbing) or ρ₋ (surging).
        bound_rhs: 2·max v_cap on the trapping interval.
    """

    defect: float
    e_start: float
    e_end: float
    dissipation: float
    bound_lhs: float
    bound_rhs: float

    @property
    def within_bound(self) -> bool:
        """Whether the a priori trapping bound holds."""
        return self.bound_lhs <= self.bound_rhs


def energy_audit(orbit: OrbitSolution, landscape: Landscape | None = None) -> EnergyAudit:
    """Audit the energy identity along the samples.

    Each interval integral uses the endpoint-corrected trapezoid
    h/2·(f₀ + f₁) + h²/12·(f₀′ − f₁′) with f = Gρ′².

    Args:
        orbit: The orbit to audit.
        landscape: Landscape (defaults to the orbit's).

    Returns:
        The audit report.
    """
    land = landscape or orbit.landscape
    rho, v, t = orbit.rho, orbit.rho_prime, orbit.t
    G = land.G(rho)
    dG = land.dG(rho)
    acc = land.F(rho) - G * v
    f = G * v * v
    df = dG * v**3 + 2.0 * G * v * acc
    h = np.diff(t)
    integral = 0.5 * h * (f[:-1] + f[1:]) + h * h / 12.0 * (df[:-1] - df[1:])
    abs_f = np.abs(f)
    abs_df = np.sign(G) * df
    total_abs = float(
        np.sum(0.5 * h * (abs_f[:-1] + abs_f[1:]) + h * h / 12.0 * (abs_df[:-1] - abs_df[1:]))
    )
    energy = 0.5 * v * v + land.V(rho)
    defects = np.abs(np.diff(energy) + integral)
    defect = 0.0 if total_abs == 0.0 else float(np.max(defects, initial=0.0) / total_abs)

    l2 = math.sqrt(float(np.sum(0.5 * h * (v[:-1] ** 2 + v[1:] ** 2))))
    ref = land.rho_star if orbit.chirality is Chirality.EBBING else land.eq.rho_minus
    grid = np.linspace(land.eq.rho_minus, land.rho_star, 2001)
    return EnergyAudit(
        defect=defect,
        e_start=float(energy[0]),
        e_end=float(energy[-1]),
        dissipation=float(np.sum(integral)),
        bound_lhs=math.sqrt(abs(float(land.G(ref)))) * l2 + float(np.max(np.abs(v))),
        bound_rhs=2.0 * float(np.max(land.v_cap(grid))),
    )


def count_turns(orbit: OrbitSolution, tol: float = 1e-8) -> int:
    """Count sign changes of ρ′ (equivalently H′) on the ρ₊ side of the orbit.

    Samples with |ρ′| ≤ ``tol`` are ignored.
    """
    if orbit.chirality is Chirality.SURGING:
        side = orbit.t <= 0.0
    else:
        side = orbit.t >= 0.0
    v = orbit.rho_prime[side]
    v = v[np.abs(v) > tol]
    if v.size < 2:
        return 0
    return int(np.count_nonzero(np.signbit(v[1:]) != np.signbit(v[:-1])))
