"""Physical parameters, end states and parameter tuning.

Holds the nondimensional parameter bundle, the two admissible end-state
heights, the tuned frame-speed and flux constants that make those heights
independent of the shallowness ε, the averaged Froude number, and the
conversion between dimensional and nondimensional parameter sets.

The nondimensionalization fixes the normalization γ ↦ 4, κ/a ↦ 4 and
exposes no alternative scalings.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, replace
from typing import Any

import numpy as np

from boreforge.utils.errors import CriticalSpeedError, NumericalError, ParameterError


logger = logging.getLogger(__name__)

# Admissible flux parameter range; the open interval is clamped for √(1 − A) conditioning.
A_MIN: float = 1e-9
A_MAX: float = 1.0 - 1e-9

_TUNING_RTOL: float = 1e-12


@dataclass(frozen=True)
class PhysParams:
    """Nondimensional parameter bundle.

    Validated eagerly at construction; downstream kernels assume a valid
    bundle and carry no further checks.

    Attributes:
        mu: Viscosity, > 0.
        a: Navier-slip parameter, > 0.
        g: Vertical gravity, ≥ 0.
        A: Flux parameter in [1e-9, 1 - 1e-9].
        sigma: Surface tension, ≥ 0.
        eps: Shallowness, in (0, 1).

    Raises:
        ParameterError: If any field violates its constraint.
    """

    mu: float
    a: float
    g: float
    A: float
    sigma: float = 0.0
    eps: float = 0.1

    def __post_init__(self) -> None:
        values = {k: float(v) for k, v in asdict(self).items()}
        bad = [k for k, v in values.items() if not math.isfinite(v)]
        if bad:
            raise ParameterError(f"Non-finite parameter(s): {', '.join(sorted(bad))}")
        if self.mu <= 0:
            raise ParameterError(f"mu must be positive, got {self.mu!r}")
        if self.a <= 0:
            raise ParameterError(f"a must be positive, got {self.a!r}")
        if self.g < 0:
            raise ParameterError(f"g must be nonnegative, got {self.g!r}")
        if self.sigma < 0:
            raise ParameterError(f"sigma must be nonnegative, got {self.sigma!r}")
        if not A_MIN <= self.A <= A_MAX:
            raise ParameterError(f"A must lie in [{A_MIN:g}, 1 - {A_MIN:g}], got {self.A!r}")
        if not 0.0 < self.eps < 1.0:
            raise ParameterError(f"eps must lie in (0, 1), got {self.eps!r}")

    @property
    def slip_ratio(self) -> float:
        """The ratio a/μ that scales the shear correction terms."""
        return self.a / self.mu

    def with_eps(self, eps: float) -> PhysParams:
        """Return a copy with a different shallowness."""
        return replace(self, eps=eps)

    def with_sigma(self, sigma: float) -> PhysParams:
        """Return a copy with a different surface tension."""
        return replace(self, sigma=sigma)

    def to_dict(self) -> dict[str, float]:
        """Serialize to the flat configuration key set."""
        return {k: float(v) for k, v in asdict(self).items()}


@dataclass(frozen=True)
class Equilibria:
    """The two end-state heights and their logarithms.

    Attributes:
        h_minus: Lower height H₋ in (0, 1/2).
        h_plus: Upper height H₊ in (1/2, 1).
        rho_minus: log H₋.
        rho_plus: log H₊.
    """

    h_minus: float
    h_plus: float
    rho_minus: float
    rho_plus: float


@dataclass(frozen=True)
class TunedConstants:
    """Frame-speed and flux corrections that pin the end states.

    Attributes:
        gamma_bar: Frame-speed correction γ̄.
        A_bar: Flux correction Ā.
        A_hat: Tuned flux Â = A + ε²Ā.
    """

    gamma_bar: float
    A_bar: float
    A_hat: float


@dataclass(frozen=True)
class FroudeNumber:
    """Averaged Froude number Fr = √(8/g).

    Attributes:
        value: Fr, ``math.inf`` when g = 0.
        supercritical_limit: True when g = 0 and ``value`` is the sentinel.
    """

    value: float
    supercritical_limit: bool = False

    @property
    def is_subcritical(self) -> bool:
        """Fr < 1 (surging bores)."""
        return self.value < 1.0


def equilibria(A: float) -> Equilibria:
    """Return the end-state heights H± = (1 ± √(1 − A))/2.

    H₋ is computed as A/(4H₊) to keep full relative precision when A is small.

    Args:
        A: Flux parameter in the open interval (0, 1).

    Returns:
        The two heights and their logarithms.

    Raises:
        ParameterError: If A is outside (0, 1); the endpoints collapse
            the two states.
    """
    if not 0.0 < A < 1.0 or not math.isfinite(A):
        raise ParameterError(f"A must lie in (0, 1), got {A!r}")
    root = math.sqrt(1.0 - A)
    h_plus = 0.5 * (1.0 + root)
    h_minus = A / (4.0 * h_plus)
    return Equilibria(
        h_minus=h_minus,
        h_plus=h_plus,
        rho_minus=math.log(h_minus),
        rho_plus=math.log(h_plus),
    )


def flux_cubic(params: PhysParams, tuned: TunedConstants, H: Any) -> Any:
    """Evaluate (4 + ε²γ̄)H − 4H² − ε²(4a/3μ)H³ (scalar or array)."""
    eps2 = params.eps**2
    k = 4.0 * params.a / (3.0 * params.mu)
    return (4.0 + eps2 * tuned.gamma_bar) * H - 4.0 * H**2 - eps2 * k * H**3


def tune(params: PhysParams) -> TunedConstants:
    """Compute the tuned constants γ̄, Ā and Â.

    Args:
        params: A validated parameter bundle.

    Returns:
        The tuned constants.

    Raises:
        NumericalError: If either end state fails the flux cubic to 1e-12
            relative (indicates a broken closed form, never a user error).
    """
    eq = equilibria(params.A)
    hp, hm = eq.h_plus, eq.h_minus
    k = 4.0 * params.a / (3.0 * params.mu)
    gamma_bar = k * (hp * hp + hp * hm + hm * hm)
    A_bar = k * (hp * hp * hm + hp * hm * hm)
    tuned = TunedConstants(
        gamma_bar=gamma_bar,
        A_bar=A_bar,
        A_hat=params.A + params.eps**2 * A_bar,
    )

    for label, height in (("H-", hm), ("H+", hp)):
        residual = abs(flux_cubic(params, tuned, height) - tuned.A_hat)
        if residual > _TUNING_RTOL * max(1.0, abs(tuned.A_hat)):
            raise NumericalError(
                f"Tuned flux cubic misses {label}: residual={residual:.3e}",
            )
    return tuned


def froude(params: PhysParams) -> FroudeNumber:
    """Return the averaged Froude number √(8/g).

    Args:
        params: A validated parameter bundle.

    Returns:
        The Froude number; g = 0 yields ``inf`` with the supercritical flag.
    """
    if params.g == 0.0:
        return FroudeNumber(value=math.inf, supercritical_limit=True)
    return FroudeNumber(value=math.sqrt(8.0 / params.g))


# -- Dimensional parameters ---------------------------------------------------


@dataclass(frozen=True)
class DimensionalParams:
    """Dimensional physical parameters (plain reals, SI-style units).

    Attributes:
        mu_d: Dynamic viscosity per unit density [m²/s], > 0.
        kappa: Horizontal (along-slope) gravity [m/s²], > 0.
        a_d: Navier-slip coefficient [1/s], > 0.
        g_d: Vertical gravity [m/s²], ≥ 0.
        sigma_d: Surface tension per unit density [m³/s²], ≥ 0.
        gamma_speed: Traveling frame speed γ [m/s], > 0.

    Raises:
        ParameterError: If any field violates its constraint.
    """

    mu_d: float
    kappa: float
    a_d: float
    g_d: float
    sigma_d: float
    gamma_speed: float

    def __post_init__(self) -> None:
        for name in ("mu_d", "kappa", "a_d", "gamma_speed"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be positive and finite, got {value!r}")
        for name in ("g_d", "sigma_d"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ParameterError(f"{name} must be nonnegative and finite, got {value!r}")

    @property
    def length_scale(self) -> float:
        """L = a·γ/κ."""
        return self.a_d * self.gamma_speed / self.kappa

    @property
    def velocity_scale(self) -> float:
        """U = γ/4."""
        return self.gamma_speed / 4.0

    @property
    def critical_speed(self) -> float:
        """The excluded frame speed 2·g·a/κ (Fr = 1)."""
        return 2.0 * self.g_d * self.a_d / self.kappa

    @property
    def iota(self) -> int:
        """Chirality sign(γ − 2ga/κ); +1 ebbing, −1 surging."""
        return 1 if self.gamma_speed > self.critical_speed else -1


def dimensionalize(dp: DimensionalParams, A: float, eps: float) -> tuple[PhysParams, float]:
    """Convert dimensional parameters to the nondimensional bundle.

    Args:
        dp: Dimensional parameters.
        A: Flux parameter in (0, 1).
        eps: Shallowness in (0, 1).

    Returns:
        The nondimensional bundle and the dimensional relative flux Φ < 0.

    Raises:
        CriticalSpeedError: If γ equals the critical speed (Fr = 1 excluded).
        ParameterError: If the resulting bundle is invalid.
    """
    if dp.gamma_speed == dp.critical_speed:
        raise CriticalSpeedError(
            f"Frame speed gamma={dp.gamma_speed!r} equals 2*g*a/kappa: Fr = 1 excluded",
        )
    gamma = dp.gamma_speed
    params = PhysParams(
        mu=4.0 * dp.kappa * dp.mu_d / (dp.a_d * gamma**2),
        a=4.0 * dp.a_d / gamma,
        g=16.0 * dp.g_d * dp.a_d / (dp.kappa * gamma),
        A=A,
        sigma=16.0 * dp.sigma_d / gamma**2,
        eps=eps,
    )
    return params, relative_flux(dp, A, eps)


def relative_flux(dp: DimensionalParams, A: float, eps: float) -> float:
    """Dimensional relative velocity flux Φ of the tuned bore (always negative)."""
    eq = equilibria(A)
    hp, hm = eq.h_plus, eq.h_minus
    a, gamma, kappa = dp.a_d, dp.gamma_speed, dp.kappa
    leading = -eps * (a * gamma**2 / (4.0 * kappa)) * A
    cubic = -(eps**3) * (a**3 * gamma**3 / (3.0 * kappa**2 * dp.mu_d)) * hp * hm * (hp + hm)
    return leading + cubic


def undimensionalize(params: PhysParams, kappa: float, gamma: float) -> DimensionalParams:
    """Invert :func:`dimensionalize` given the fixed scales κ and γ.

    Args:
        params: Nondimensional bundle.
        kappa: Horizontal gravity used for the scaling.
        gamma: Frame speed used for the scaling.

    Returns:
        The dimensional parameters that map back onto ``params``.
    """
    a_d = params.a * gamma / 4.0
    return DimensionalParams(
        mu_d=params.mu * a_d * gamma**2 / (4.0 * kappa),
        kappa=kappa,
        a_d=a_d,
        g_d=params.g * kappa * gamma / (16.0 * a_d),
        sigma_d=params.sigma * gamma**2 / 16.0,
        gamma_speed=gamma,
    )


@dataclass(frozen=True)
class EndStates:
    """Dimensional far-field states of a tuned bore.

    Attributes:
        iota: Chirality, +1 ebbing and −1 surging.
        zeta_minus: Dimensional lower surface height ε(aγ/κ)H₋.
        zeta_plus: Dimensional upper surface height ε(aγ/κ)H₊.
        pressure_minus: Far-field pressure (gaγ/κ)H₋.
        pressure_plus: Far-field pressure (gaγ/κ)H₊.
        bottom_speed_minus: Far-field bottom velocity γH₋.
        bottom_speed_plus: Far-field bottom velocity γH₊.
        upstream: Height at x → −∞.
        downstream: Height at x → +∞.
    """

    iota: int
    zeta_minus: float
    zeta_plus: float
    pressure_minus: float
    pressure_plus: float
    bottom_speed_minus: float
    bottom_speed_plus: float
    upstream: float
    downstream: float

    @property
    def jump_ratio(self) -> float:
        """Downstream over upstream height (> 1 ebbing, < 1 surging)."""
        return self.downstream / self.upstream


def end_state_limits(dp: DimensionalParams, A: float, eps: float) -> EndStates:
    """Return the dimensional end states of the bore for (dp, A, ε).

    Ebbing bores (ι = +1) carry the taller state downstream; surging bores
    carry it upstream.

    Raises:
        CriticalSpeedError: At the critical frame speed.
    """
    if dp.gamma_speed == dp.critical_speed:
        raise CriticalSpeedError("Fr = 1 excluded: no bore at the critical frame speed")
    eq = equilibria(A)
    scale = eps * dp.length_scale
    zeta_minus, zeta_plus = scale * eq.h_minus, scale * eq.h_plus
    p_scale = dp.g_d * dp.length_scale
    iota = dp.iota
    upstream, downstream = (zeta_minus, zeta_plus) if iota == 1 else (zeta_plus, zeta_minus)
    return EndStates(
        iota=iota,
        zeta_minus=zeta_minus,
        zeta_plus=zeta_plus,
        pressure_minus=p_scale * eq.h_minus,
        pressure_plus=p_scale * eq.h_plus,
        bottom_speed_minus=dp.gamma_speed * eq.h_minus,
        bottom_speed_plus=dp.gamma_speed * eq.h_plus,
        upstream=upstream,
        downstream=downstream,
    )


def shear_heights(flux: float, dp: DimensionalParams, A: float, eps: float) -> tuple[float, ...]:
    """Heights of the equilibrium shear flows carrying a given relative flux.

    Solves (κ/3μ)h³ + (κ/ā)h² − γ̄h = Φ with ā = εa and the tuned dimensional
    frame speed γ̄ = γ + ε²(a²γ²/3κμ)(H₊² + H₊H₋ + H₋²).

    Args:
        flux: Relative flux Φ.
        dp: Dimensional parameters.
        A: Flux parameter fixing the tuning.
        eps: Shallowness.

    Returns:
        The positive real roots in increasing order.
    """
    eq = equilibria(A)
    hp, hm = eq.h_plus, eq.h_minus
    a, gamma, kappa, mu = dp.a_d, dp.gamma_speed, dp.kappa, dp.mu_d
    gamma_bar = gamma + eps**2 * (a**2 * gamma**2 / (3.0 * kappa * mu)) * (hp**2 + hp * hm + hm**2)
    coeffs = [kappa / (3.0 * mu), kappa / (eps * a), -gamma_bar, -flux]
    roots = np.roots(coeffs)
    scale = max(1.0, float(np.max(np.abs(roots))))
    real = sorted(
        float(r.real) for r in roots if abs(r.imag) <= 1e-10 * scale and r.real > 0.0
    )
    logger.debug("Shear heights flux=%.6g roots=%s", flux, real)
    return tuple(real)
