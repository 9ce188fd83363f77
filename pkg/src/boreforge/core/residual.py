"""Residuals of the flattened free-boundary Navier-Stokes system.

Feeds a :class:`~boreforge.core.fields.FieldGrid` into every equation of the
tuned flattened system

    (u − c e₁)·∇^𝒜u + ∇^𝒜p − μΔ^𝒜u − 4a e₁ = 0,   ∇^𝒜·u = 0      in Ω_ε
    −(p − μ𝔻^𝒜u)𝒩 + (gζ − εσℋ(εζ))𝒩 = 0                          on Σ_ε
    u₂ = 0,   μ∂₂^𝒜u₁ − εa u₁ = 0                                  on Σ₀
    (c − ⨍u₁)ζ − cζ″ − ε⁻¹∂₁(u·𝒩) = Â                              on Σ_ε

with c = 4 + ε²γ̄ and Â = A + ε²Ā, and reports grid norms of each residual.
A mirrored grid (orientation −1) flips c, the forcing and Â.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from boreforge.core.fields import (
    FieldGrid,
    Frame,
    GeometryOps,
    GridSpec,
    SPoly,
    constant_grid,
    ddx,
    divergence_field,
    reconstruct,
)
from boreforge.core.params import PhysParams, TunedConstants, flux_cubic, tune
from boreforge.core.profile import ShallowProfile, build_profile
from boreforge.utils.errors import ParameterError


logger = logging.getLogger(__name__)

SWEEP_COLUMNS: tuple[str, ...] = (
    "eps",
    "momentum1_L2",
    "momentum2_L2",
    "stress1",
    "stress2",
    "slip",
    "flux",
    "fitted_order",
)

_REFINE_RTOL: float = 0.1
_REFINE_FLOOR: float = 1e-10
_MIN_REFINE_NODES: int = 9


@dataclass(frozen=True)
class Norms:
    """Root-mean-square and sup norm of a residual over its nodes."""

    l2: float
    sup: float

    @classmethod
    def of(cls, values: np.ndarray) -> Norms:
        """Norms of a node array."""
        v = np.asarray(values, dtype=float)
        if v.size == 0:
            return cls(0.0, 0.0)
        return cls(l2=float(np.sqrt(np.mean(v * v))), sup=float(np.max(np.abs(v))))


@dataclass(frozen=True)
class ResidualReport:
    """Per-equation residual norms of one field grid.

    Attributes:
        eps: The ε used.
        momentum1: Horizontal momentum residual (bulk nodes).
        momentum2: Vertical momentum residual (bulk nodes).
        divergence: sup of ∇^𝒜·u over interior nodes.
        stress_bc1: Horizontal dynamic boundary residual on Σ_ε.
        stress_bc2: Vertical dynamic boundary residual on Σ_ε.
        slip_bc: Navier-slip residual μ∂₂^𝒜u₁ − εa·u₁ on Σ₀.
        impermeability: sup |u₂| on Σ₀.
        flux_eq: Regularized flux-equation residual.
        flux_plain: Plain flux-equation residual (c − ⨍u₁)ζ − Â.
        field_scale: max(sup|u|, sup|p|) used for relative norms.
        converged: Result of the refinement check, ``None`` when not run.
        refinement_change: Relative change of the momentum residual under coarsening.
    """

    eps: float
    momentum1: Norms
    momentum2: Norms
    divergence: float
    stress_bc1: Norms
    stress_bc2: Norms
    slip_bc: Norms
    impermeability: float
    flux_eq: Norms
    flux_plain: Norms
    field_scale: float
    converged: bool | None = None
    refinement_change: float | None = None

    def relative(self, norms: Norms) -> Norms:
        """``norms`` divided by the field magnitude."""
        scale = self.field_scale if self.field_scale > 0 else 1.0
        return Norms(l2=norms.l2 / scale, sup=norms.sup / scale)

    def max_sup(self) -> float:
        """Largest sup norm over every entry."""
        return max(
            self.momentum1.sup,
            self.momentum2.sup,
            self.divergence,
            self.stress_bc1.sup,
            self.stress_bc2.sup,
            self.slip_bc.sup,
            self.impermeability,
            self.flux_eq.sup,
            self.flux_plain.sup,
        )

    def to_dict(self) -> dict[str, Any]:
        """JSON report."""
        norms = {
            name: {"l2": value.l2, "sup": value.sup}
            for name, value in (
                ("momentum1", self.momentum1),
                ("momentum2", self.momentum2),
                ("stress_bc1", self.stress_bc1),
                ("stress_bc2", self.stress_bc2),
                ("slip_bc", self.slip_bc),
                ("flux_eq", self.flux_eq),
                ("flux_plain", self.flux_plain),
            )
        }
        relative = {name: self.relative(Norms(**n)).sup for name, n in norms.items()}
        return {
            "eps": self.eps,
            **norms,
            "divergence": self.divergence,
            "impermeability": self.impermeability,
            "field_scale": self.field_scale,
            "relative_sup": relative,
            "converged": self.converged,
            "refinement_change": self.refinement_change,
        }


# -- Residual fields ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ResidualFields:
    """Residuals as polynomials in s (bulk) or x-arrays (boundaries)."""

    momentum1: SPoly
    momentum2: SPoly
    stress1: np.ndarray
    stress2: np.ndarray
    slip: np.ndarray
    impermeability: np.ndarray
    flux_regularized: np.ndarray
    flux_plain: np.ndarray


def residual_fields(grid: FieldGrid, params: PhysParams | None = None) -> ResidualFields:
    """Evaluate every residual of the flattened system on ``grid``."""
    p = params or grid.params
    tuned = grid.tuned if params is None else tune(params)
    geom = grid.geom
    o = float(grid.orientation)
    c = o * (4.0 + p.eps**2 * tuned.gamma_bar)
    u1, u2, pr = grid.u1_poly, grid.u2_poly, grid.p_poly

    d1u1, d2u1 = geom.d1(u1), geom.d2(u1)
    d1u2, d2u2 = geom.d1(u2), geom.d2(u2)
    rel1 = u1.shift(-c)

    momentum1 = (
        rel1 * d1u1
        + u2 * d2u1
        + geom.d1(pr)
        - (geom.laplacian(u1) * p.mu).shift(o * 4.0 * p.a)
    )
    momentum2 = rel1 * d1u2 + u2 * d2u2 + geom.d2(pr) - geom.laplacian(u2) * p.mu

    n1, n2 = geom.normal
    D11 = 2.0 * d1u1.top()
    D12 = d2u1.top() + d1u2.top()
    D22 = 2.0 * d2u2.top()
    pt = pr.top()
    surface = p.g * geom.zeta - p.eps * p.sigma * geom.mean_curvature
    stress1 = -pt * n1 + p.mu * (D11 * n1 + D12 * n2) + surface * n1
    stress2 = -pt * n2 + p.mu * (D12 * n1 + D22 * n2) + surface * n2

    slip = p.mu * d2u1.bottom() - p.eps * p.a * u1.bottom()
    a_hat = o * tuned.A_hat
    plain = (c - u1.mean()) * geom.zeta - a_hat
    normal_flux = u1.top() * n1 + u2.top() * n2
    regularized = (
        (c - u1.mean()) * geom.zeta
        - c * geom.d2zeta
        - ddx(normal_flux, geom.h) / p.eps
        - a_hat
    )
    return ResidualFields(
        momentum1=momentum1,
        momentum2=momentum2,
        stress1=stress1,
        stress2=stress2,
        slip=slip,
        impermeability=u2.bottom(),
        flux_regularized=regularized,
        flux_plain=plain,
    )


def _report(grid: FieldGrid, params: PhysParams | None) -> ResidualReport:
    p = params or grid.params
    r = residual_fields(grid, params)
    s = grid.s_nodes
    div = divergence_field(grid)
    interior = div[1:-1, 1:-1] if grid.ny > 2 else div[:, 1:-1]
    u1 = grid.u1_poly.at(s)
    scale = max(
        float(np.max(np.abs(u1))),
        float(np.max(np.abs(grid.u2))),
        float(np.max(np.abs(grid.p))),
    )
    return ResidualReport(
        eps=p.eps,
        momentum1=Norms.of(r.momentum1.at(s)),
        momentum2=Norms.of(r.momentum2.at(s)),
        divergence=float(np.max(np.abs(interior), initial=0.0)),
        stress_bc1=Norms.of(r.stress1),
        stress_bc2=Norms.of(r.stress2),
        slip_bc=Norms.of(r.slip),
        impermeability=float(np.max(np.abs(r.impermeability))),
        flux_eq=Norms.of(r.flux_regularized),
        flux_plain=Norms.of(r.flux_plain),
        field_scale=scale,
    )


def coarsen(grid: FieldGrid) -> FieldGrid:
    """Every other x-node of ``grid`` (spacing doubled)."""
    geom = grid.geom
    coarse_geom = GeometryOps(
        eps=geom.eps,
        h=2.0 * geom.h,
        zeta=geom.zeta[::2].copy(),
        dzeta=geom.dzeta[::2].copy(),
        d2zeta=geom.d2zeta[::2].copy(),
    )
    return replace(
        grid,
        x_nodes=grid.x_nodes[::2].copy(),
        geom=coarse_geom,
        u1_poly=SPoly(grid.u1_poly.coeffs[:, ::2].copy()),
        u2_poly=SPoly(grid.u2_poly.coeffs[:, ::2].copy()),
        p_poly=SPoly(grid.p_poly.coeffs[:, ::2].copy()),
    )


def refinement_change(fine: ResidualReport, coarse: ResidualReport) -> float:
    """Relative change of the momentum residual between two resolutions."""
    a, b = fine.momentum1.l2, coarse.momentum1.l2
    if max(a, b) <= _REFINE_FLOOR:
        return 0.0
    return abs(b - a) / max(a, _REFINE_FLOOR)


def evaluate_residuals(
    grid: FieldGrid,
    geom: GeometryOps | None = None,
    params: PhysParams | None = None,
    refine: bool = True,
) -> ResidualReport:
    """Residual norms of ``grid`` in the flattened system.

    Args:
        grid: Field grid (its node frame is irrelevant; lab-frame fields are used).
        geom: Geometry override (defaults to the grid's).
        params: Parameter override (defaults to the grid's), e.g. to change σ.
        refine: Compare against the grid with every other x-node removed and
            flag the report when the residual is not grid-converged.

    Returns:
        The report; ``converged`` is False when discretization error
        dominates the residual.
    """
    if geom is not None:
        grid = replace(grid, geom=geom)
    if params is not None:
        grid = replace(grid, params=params, tuned=tune(params))
    report = _report(grid, None)
    if not refine or grid.nx < _MIN_REFINE_NODES:
        return report
    change = refinement_change(report, _report(coarsen(grid), None))
    converged = change <= _REFINE_RTOL
    if not converged:
        logger.warning(
            "Residual not grid-converged eps=%.4g nx=%d change=%.3g",
            report.eps,
            grid.nx,
            change,
        )
    return replace(report, converged=converged, refinement_change=change)


def flux_equivalence_gap(grid: FieldGrid, margin: int = 4) -> float:
    """sup |regularized − (1 − ∂ₓ²)plain| away from the x-edges."""
    r = residual_fields(grid)
    h = grid.geom.h
    smoothed = r.flux_plain - ddx(ddx(r.flux_plain, h), h)
    gap = np.abs(r.flux_regularized - smoothed)
    return float(np.max(gap[margin:-margin])) if gap.size > 2 * margin else float(np.max(gap))


# -- Exact shear flow --------------------------------------------------------------


@dataclass(frozen=True)
class ShearFlow:
    """Constant-height shear solution ζ = H, u = b(y)e₁, p = gH.

    Attributes:
        params: Parameter bundle.
        tuned: Tuned constants.
        H: The height.
    """

    params: PhysParams
    tuned: TunedConstants
    H: float

    def b(self, y: Any) -> Any:
        """b(y) = 4H + 4(a/μ)H²(εy − y²/2) for y ∈ [0, ε]."""
        p, H = self.params, self.H
        return 4.0 * H + 4.0 * (p.a / p.mu) * H * H * (p.eps * y - 0.5 * y * y)

    @property
    def pressure(self) -> float:
        """p = gH."""
        return self.params.g * self.H

    @property
    def relative_flux(self) -> float:
        """(4 + ε²γ̄)H − 4H² − ε²(4a/3μ)H³."""
        return float(flux_cubic(self.params, self.tuned, self.H))

    def to_grid(self, spec: GridSpec | None = None) -> FieldGrid:
        """Field grid of the shear flow (u₁ as a quadratic in s = y/ε)."""
        spec = spec or GridSpec(nx=64, ny=17, x_range=(-1.0, 1.0), frame=Frame.LAB)
        p, H = self.params, self.H
        k = 4.0 * (p.a / p.mu) * H * H * p.eps**2
        return constant_grid(
            p,
            self.tuned,
            H,
            [4.0 * H, k, -0.5 * k],
            self.pressure,
            spec,
        )


def shear_flow_exact(params: PhysParams, H: float) -> ShearFlow:
    """Exact shear equilibrium of height H.

    Raises:
        ParameterError: If H is not positive.
    """
    if not (math.isfinite(H) and H > 0):
        raise ParameterError(f"Shear height must be positive, got {H!r}")
    return ShearFlow(params=params, tuned=tune(params), H=H)


# -- ε-scaling --------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    """One row of the ε-scaling table."""

    eps: float
    report: ResidualReport
    fitted_order: float

    def as_row(self) -> dict[str, float]:
        """CSV row keyed by :data:`SWEEP_COLUMNS`."""
        r = self.report
        return {
            "eps": self.eps,
            "momentum1_L2": r.momentum1.l2,
            "momentum2_L2": r.momentum2.l2,
            "stress1": r.stress_bc1.l2,
            "stress2": r.stress_bc2.l2,
            "slip": r.slip_bc.l2,
            "flux": r.flux_eq.l2,
            "fitted_order": self.fitted_order,
        }


@dataclass(frozen=True)
class EpsilonSweep:
    """ε-scaling study of the leading-order residual.

    Attributes:
        rows: One row per ε, in input order; ``fitted_order`` of row i is
            log(r_{i−1}/r_i)/log(ε_{i−1}/ε_i) for the momentum1 L² norm
            (NaN on the first row).
        overall_order: Least-squares slope of log r against log ε.
    """

    rows: list[SweepRow] = field(default_factory=list)
    overall_order: float = math.nan

    @property
    def min_order(self) -> float:
        """Smallest pairwise order."""
        orders = [r.fitted_order for r in self.rows[1:]]
        return min(orders) if orders else math.nan


def fitted_order(r_a: float, r_b: float, eps_a: float, eps_b: float) -> float:
    """log(r_a/r_b)/log(ε_a/ε_b)."""
    if r_a <= 0 or r_b <= 0 or eps_a == eps_b:
        return math.nan
    return math.log(r_a / r_b) / math.log(eps_a / eps_b)


def epsilon_sweep(
    profile: ShallowProfile,
    eps_values: Sequence[float],
    spec: GridSpec | None = None,
) -> EpsilonSweep:
    """Residual norms of the leading-order fields for several ε.

    Args:
        profile: Shallow-water profile (ε-independent).
        eps_values: The ε values.
        spec: Grid specification shared by every ε.

    Returns:
        The sweep with fitted orders.
    """
    spec = spec or GridSpec(nx=257, ny=17)
    rows: list[SweepRow] = []
    for eps in eps_values:
        params = profile.params.with_eps(eps)
        prof = build_profile(profile.orbit, params)
        report = evaluate_residuals(reconstruct(prof, params, spec))
        order = math.nan
        if rows:
            prev = rows[-1]
            order = fitted_order(prev.report.momentum1.l2, report.momentum1.l2, prev.eps, eps)
        rows.append(SweepRow(eps=eps, report=report, fitted_order=order))
        logger.info("eps sweep point eps=%.4g momentum1_L2=%.3e", eps, report.momentum1.l2)

    overall = math.nan
    values = [(r.eps, r.report.momentum1.l2) for r in rows if r.report.momentum1.l2 > 0]
    if len(values) >= 2:
        logs = np.log(np.array(values))
        overall = float(np.polyfit(logs[:, 0], logs[:, 1], 1)[0])
    return EpsilonSweep(rows=rows, overall_order=overall)
