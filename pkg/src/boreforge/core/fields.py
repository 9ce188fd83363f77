"""Two-dimensional bore fields on the flattened strip.

The strip Ω_ε = ℝ × (0, ε) is parameterised by x and the scaled height
s = y/ε ∈ [0, 1].  Every field of the leading-order ansatz is a polynomial in
s whose coefficients are functions of x, so fields are stored as coefficient
arrays of shape (degree + 1, nx).  s-derivatives act exactly on the
coefficients; x-derivatives use fourth-order finite differences on the
uniform x grid.  The flattened operators then read

    ∂₁^𝒜 f = ∂ₓf − (sζ′/ζ)∂ₛf,      ∂₂^𝒜 f = ∂ₛf/(εζ),

and ∂₁^𝒜 maps the coefficient c_k to ∂ₓc_k − k(ζ′/ζ)c_k.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any

import numpy as np
from scipy.interpolate import CubicSpline

from boreforge.core.orbit import OrbitSolution
from boreforge.core.params import PhysParams, TunedConstants, tune
from boreforge.core.profile import ShallowProfile
from boreforge.utils.errors import GridDomainError


logger = logging.getLogger(__name__)

MIN_NX: int = 5
MIN_NY: int = 2
DEFAULT_SEEDS: int = 12


# -- Finite differences ----------------------------------------------------------


def ddx(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order first derivative along the last axis of a uniform grid.

    Central five-point stencils in the interior, one-sided five-point
    stencils on the two outermost nodes at each end.

    Raises:
        GridDomainError: If fewer than five nodes are given.
    """
    f = np.asarray(values, dtype=float)
    if f.shape[-1] < MIN_NX:
        raise GridDomainError(f"Need at least {MIN_NX} x-nodes, got {f.shape[-1]}")
    out = np.empty_like(f)
    out[..., 2:-2] = (f[..., :-4] - 8.0 * f[..., 1:-3] + 8.0 * f[..., 3:-1] - f[..., 4:]) / (
        12.0 * h
    )
    out[..., 0] = (
        -25.0 * f[..., 0] + 48.0 * f[..., 1] - 36.0 * f[..., 2] + 16.0 * f[..., 3] - 3.0 * f[..., 4]
    ) / (12.0 * h)
    out[..., 1] = (
        -3.0 * f[..., 0] - 10.0 * f[..., 1] + 18.0 * f[..., 2] - 6.0 * f[..., 3] + f[..., 4]
    ) / (12.0 * h)
    out[..., -1] = (
        25.0 * f[..., -1] - 48.0 * f[..., -2] + 36.0 * f[..., -3] - 16.0 * f[..., -4] + 3.0 * f[..., -5]
    ) / (12.0 * h)
    out[..., -2] = (
        3.0 * f[..., -1] + 10.0 * f[..., -2] - 18.0 * f[..., -3] + 6.0 * f[..., -4] - f[..., -5]
    ) / (12.0 * h)
    return out


# -- Polynomials in the scaled height ----------------------------------------------


@dataclass(frozen=True, eq=False)
class SPoly:
    """Field Σ_k c_k(x)·s^k stored as coefficients of shape (K, nx)."""

    __array_ufunc__ = None

    coeffs: np.ndarray

    @classmethod
    def from_list(cls, coeffs: Sequence[Any], nx: int) -> SPoly:
        """Stack scalar or per-x coefficients, lowest degree first."""
        rows = [np.broadcast_to(np.asarray(c, dtype=float), (nx,)) for c in coeffs]
        return cls(np.array(rows))

    @property
    def nx(self) -> int:
        """Number of x-nodes."""
        return int(self.coeffs.shape[1])

    @property
    def degree(self) -> int:
        """Polynomial degree in s (padding included)."""
        return int(self.coeffs.shape[0] - 1)

    def _padded(self, size: int) -> np.ndarray:
        if self.coeffs.shape[0] == size:
            return self.coeffs
        out = np.zeros((size, self.nx))
        out[: self.coeffs.shape[0]] = self.coeffs
        return out

    def __add__(self, other: SPoly) -> SPoly:
        size = max(self.coeffs.shape[0], other.coeffs.shape[0])
        return SPoly(self._padded(size) + other._padded(size))

    def __sub__(self, other: SPoly) -> SPoly:
        return self + (-other)

    def __neg__(self) -> SPoly:
        return SPoly(-self.coeffs)

    def __mul__(self, other: SPoly | np.ndarray | float) -> SPoly:
        if isinstance(other, SPoly):
            k1, k2 = self.coeffs.shape[0], other.coeffs.shape[0]
            out = np.zeros((k1 + k2 - 1, self.nx))
            for i in range(k1):
                for j in range(k2):
                    out[i + j] += self.coeffs[i] * other.coeffs[j]
            return SPoly(out)
        return SPoly(self.coeffs * np.asarray(other, dtype=float))

    __rmul__ = __mul__

    def shift(self, constant: float) -> SPoly:
        """Add a constant to the s⁰ coefficient."""
        out = self.coeffs.copy()
        out[0] = out[0] + constant
        return SPoly(out)

    def ds(self) -> SPoly:
        """Exact ∂ₛ."""
        if self.coeffs.shape[0] == 1:
            return SPoly(np.zeros((1, self.nx)))
        k = np.arange(1, self.coeffs.shape[0])[:, None]
        return SPoly(k * self.coeffs[1:])

    def dx(self, h: float) -> SPoly:
        """∂ₓ of every coefficient by fourth-order differences."""
        return SPoly(ddx(self.coeffs, h))

    def at(self, s: Any) -> np.ndarray:
        """Node values of shape (len(s), nx), by Horner's rule."""
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))[:, None]
        out = np.zeros((s_arr.shape[0], self.nx))
        for c in self.coeffs[::-1]:
            out = out * s_arr + c
        return out

    def top(self) -> np.ndarray:
        """Values at s = 1."""
        return self.coeffs.sum(axis=0)

    def bottom(self) -> np.ndarray:
        """Values at s = 0."""
        return self.coeffs[0].copy()

    def mean(self) -> np.ndarray:
        """∫₀¹ f ds, the vertical average."""
        k = np.arange(self.coeffs.shape[0])[:, None]
        return (self.coeffs / (k + 1.0)).sum(axis=0)

    def reversed_x(self) -> SPoly:
        """Coefficients with the x-axis flipped."""
        return SPoly(self.coeffs[:, ::-1].copy())


# -- Geometry -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GeometryOps:
    """Flattening geometry of a free surface ζ on a uniform x grid.

    Attributes:
        eps: Shallowness ε.
        h: Uniform x spacing.
        zeta: ζ at the x-nodes.
        dzeta: ζ′ at the x-nodes.
        d2zeta: ζ″ at the x-nodes.
    """

    eps: float
    h: float
    zeta: np.ndarray
    dzeta: np.ndarray
    d2zeta: np.ndarray

    @property
    def jacobian_det(self) -> np.ndarray:
        """det ∇𝔉_ζ = ζ."""
        return self.zeta

    @property
    def normal(self) -> tuple[np.ndarray, np.ndarray]:
        """Non-unit normal 𝒩_{εζ} = (−εζ′, 1) on the top boundary."""
        return -self.eps * self.dzeta, np.ones_like(self.zeta)

    @property
    def mean_curvature(self) -> np.ndarray:
        """ℋ(εζ) = εζ″/(1 + ε²ζ′²)^{3/2}."""
        return self.eps * self.d2zeta / (1.0 + (self.eps * self.dzeta) ** 2) ** 1.5

    def matrix(self, index: int, s: float) -> np.ndarray:
        """𝒜_ζ at x-node ``index`` and y = εs: [[1, −yζ′/ζ], [0, 1/ζ]]."""
        z, dz = self.zeta[index], self.dzeta[index]
        return np.array([[1.0, -self.eps * s * dz / z], [0.0, 1.0 / z]])

    def d1(self, f: SPoly) -> SPoly:
        """∂₁^𝒜 f."""
        k = np.arange(f.coeffs.shape[0])[:, None]
        return SPoly(ddx(f.coeffs, self.h) - k * (self.dzeta / self.zeta) * f.coeffs)

    def d2(self, f: SPoly) -> SPoly:
        """∂₂^𝒜 f."""
        return f.ds() * (1.0 / (self.eps * self.zeta))

    def laplacian(self, f: SPoly) -> SPoly:
        """Δ^𝒜 f = ∂₁^𝒜∂₁^𝒜 f + ∂₂^𝒜∂₂^𝒜 f."""
        return self.d1(self.d1(f)) + self.d2(self.d2(f))

    def reflected(self) -> GeometryOps:
        """Geometry of ζ(−x) on the mirrored grid."""
        return GeometryOps(
            eps=self.eps,
            h=self.h,
            zeta=self.zeta[::-1].copy(),
            dzeta=-self.dzeta[::-1],
            d2zeta=self.d2zeta[::-1].copy(),
        )


# -- Field grids -----------------------------------------------------------------------


class Frame(Enum):
    """Reference frame of node-valued horizontal velocity."""

    LAB = "lab"
    """The flattened unknown u itself."""

    TRAVELING = "traveling"
    """u − ι(4 + ε²γ̄)e₁, the flow seen by an observer moving with the wave."""


@dataclass(frozen=True)
class GridSpec:
    """Resolution and extent of a field grid.

    Attributes:
        nx: Number of x-nodes (≥ 5).
        ny: Number of s-nodes including both boundaries (≥ 2).
        x_range: (x_min, x_max); ``None`` selects the orbit's transition window.
        leading_only: Keep only V = Ue₁ − yζU′e₂ and P (the ε → 0 ansatz).
        frame: Frame of node-valued velocities.
    """

    nx: int = 128
    ny: int = 33
    x_range: tuple[float, float] | None = None
    leading_only: bool = False
    frame: Frame = Frame.TRAVELING

    def __post_init__(self) -> None:
        if self.nx < MIN_NX:
            raise GridDomainError(f"nx must be at least {MIN_NX}, got {self.nx}")
        if self.ny < MIN_NY:
            raise GridDomainError(f"ny must be at least {MIN_NY}, got {self.ny}")
        if self.x_range is not None and not self.x_range[0] < self.x_range[1]:
            raise GridDomainError(f"Empty x_range {self.x_range!r}")


@dataclass(frozen=True, eq=False)
class FieldGrid:
    """Leading-order bore fields on a tensor grid of the flattened strip.

    Velocities and pressure are stored in the lab frame as polynomials in s;
    ``frame`` only changes the node values reported by :attr:`u1`.

    Attributes:
        x_nodes: Uniform, increasing x-nodes.
        s_nodes: Scaled heights in [0, 1], increasing.
        params: Parameter bundle.
        tuned: Tuned constants.
        geom: Flattening geometry.
        u1_poly: Horizontal velocity.
        u2_poly: Vertical velocity.
        p_poly: Pressure.
        frame: Frame of the node values.
        orientation: +1, or −1 for a mirrored grid (x ↦ −x).
        leading_only: Whether the ε² corrections were dropped.
    """

    x_nodes: np.ndarray
    s_nodes: np.ndarray
    params: PhysParams
    tuned: TunedConstants
    geom: GeometryOps
    u1_poly: SPoly
    u2_poly: SPoly
    p_poly: SPoly
    frame: Frame = Frame.TRAVELING
    orientation: int = 1
    leading_only: bool = False

    @property
    def eps(self) -> float:
        """Shallowness ε."""
        return self.params.eps

    @property
    def nx(self) -> int:
        """Number of x-nodes."""
        return len(self.x_nodes)

    @property
    def ny(self) -> int:
        """Number of s-nodes."""
        return len(self.s_nodes)

    @property
    def y_nodes(self) -> np.ndarray:
        """Flattened heights y = εs ∈ [0, ε]."""
        return self.eps * self.s_nodes

    @property
    def zeta(self) -> np.ndarray:
        """Free surface ζ at the x-nodes."""
        return self.geom.zeta

    @property
    def frame_speed(self) -> float:
        """Signed frame speed ι·(4 + ε²γ̄), ι the grid orientation."""
        return self.orientation * (4.0 + self.eps**2 * self.tuned.gamma_bar)

    @property
    def u1(self) -> np.ndarray:
        """Horizontal velocity at the nodes, shape (ny, nx), in :attr:`frame`."""
        lab = self.u1_poly.at(self.s_nodes)
        if self.frame is Frame.TRAVELING:
            return lab - self.frame_speed
        return lab

    @property
    def u2(self) -> np.ndarray:
        """Vertical velocity at the nodes, shape (ny, nx)."""
        return self.u2_poly.at(self.s_nodes)

    @property
    def p(self) -> np.ndarray:
        """Pressure at the nodes, shape (ny, nx)."""
        return self.p_poly.at(self.s_nodes)

    def with_frame(self, frame: Frame) -> FieldGrid:
        """Same fields reported in another frame."""
        return replace(self, frame=frame)

    def physical_heights(self) -> np.ndarray:
        """Node heights in the fluid domain, yζ(x), shape (ny, nx)."""
        return self.y_nodes[:, None] * self.zeta[None, :]

    def to_dict(self, include_vorticity: bool = True) -> dict[str, Any]:
        """JSON field dump {x_nodes, y_nodes, zeta, u1, u2, p, omega}."""
        data: dict[str, Any] = {
            "frame": self.frame.value,
            "x_nodes": self.x_nodes.tolist(),
            "y_nodes": self.y_nodes.tolist(),
            "zeta": self.zeta.tolist(),
            "u1": self.u1.tolist(),
            "u2": self.u2.tolist(),
            "p": self.p.tolist(),
        }
        if include_vorticity:
            data["omega"] = vorticity(self).tolist()
        return data


def default_window(orbit: OrbitSolution, tol: float = 1e-6) -> tuple[float, float]:
    """x-window outside which ρ is within ``tol`` of its end states."""
    rho = orbit.rho
    left, right = orbit.rho_limits
    away_left = np.flatnonzero(np.abs(rho - left) > tol)
    away_right = np.flatnonzero(np.abs(rho - right) > tol)
    lo = orbit.t[away_left[0]] if away_left.size else orbit.t[0]
    hi = orbit.t[away_right[-1]] if away_right.size else orbit.t[-1]
    if not lo < hi:
        return orbit.t_range
    return float(lo), float(hi)


def reconstruct(
    profile: ShallowProfile,
    params: PhysParams | None = None,
    spec: GridSpec | None = None,
) -> FieldGrid:
    """Build the leading-order fields ζ = H, u = V + ε²W, p = P + ε²Q.

    With σ = s·ζ (the scaled physical height yζ/ε):

        u₁ = U + ε²(σU₁ + ½σ²U₂)
        u₂ = −εσU′ − ε³(½σ²U₁′ + ⅙σ³U₂′)
        p  = P + ε²(σP₁ + ½σ²P₂)

    Args:
        profile: The shallow-water profile.
        params: Parameter bundle (defaults to the profile's); sets ε.
        spec: Grid specification.

    Returns:
        The field grid.

    Raises:
        GridDomainError: If the x-range leaves the orbit's domain.
    """
    spec = spec or GridSpec()
    params = params or profile.params
    x_range = spec.x_range or default_window(profile.orbit)
    x = np.linspace(x_range[0], x_range[1], spec.nx)
    s = np.linspace(0.0, 1.0, spec.ny)
    b = profile.bundle(x, exact=True)
    eps = params.eps
    e2 = eps * eps
    z = b.H
    nx = spec.nx

    if spec.leading_only:
        u1 = SPoly.from_list([b.U], nx)
        u2 = SPoly.from_list([0.0, -eps * z * b.dU], nx)
        p = SPoly.from_list([b.P], nx)
    else:
        u1 = SPoly.from_list([b.U, e2 * z * b.U1, 0.5 * e2 * z**2 * b.U2], nx)
        u2 = SPoly.from_list(
            [
                0.0,
                -eps * z * b.dU,
                -0.5 * eps * e2 * z**2 * b.dU1,
                -eps * e2 * z**3 * b.dU2 / 6.0,
            ],
            nx,
        )
        p = SPoly.from_list([b.P, e2 * z * b.P1, 0.5 * e2 * z**2 * b.P2], nx)

    geom = GeometryOps(eps=eps, h=float(x[1] - x[0]), zeta=z, dzeta=b.dH, d2zeta=b.d2H)
    grid = FieldGrid(
        x_nodes=x,
        s_nodes=s,
        params=params,
        tuned=profile.tuned if params is profile.params else tune(params),
        geom=geom,
        u1_poly=u1,
        u2_poly=u2,
        p_poly=p,
        frame=spec.frame,
        leading_only=spec.leading_only,
    )
    logger.info(
        "Fields reconstructed nx=%d ny=%d x_range=(%.4g, %.4g) eps=%.4g",
        spec.nx,
        spec.ny,
        x_range[0],
        x_range[1],
        eps,
    )
    return grid


def constant_grid(
    params: PhysParams,
    tuned: TunedConstants,
    H: float,
    u1_coeffs: Sequence[float],
    pressure: float,
    spec: GridSpec,
) -> FieldGrid:
    """Grid of an x-independent state with ζ ≡ H and u₂ ≡ 0."""
    x_range = spec.x_range or (-1.0, 1.0)
    x = np.linspace(x_range[0], x_range[1], spec.nx)
    nx = spec.nx
    geom = GeometryOps(
        eps=params.eps,
        h=float(x[1] - x[0]),
        zeta=np.full(nx, H),
        dzeta=np.zeros(nx),
        d2zeta=np.zeros(nx),
    )
    return FieldGrid(
        x_nodes=x,
        s_nodes=np.linspace(0.0, 1.0, spec.ny),
        params=params,
        tuned=tuned,
        geom=geom,
        u1_poly=SPoly.from_list(list(u1_coeffs), nx),
        u2_poly=SPoly.from_list([0.0], nx),
        p_poly=SPoly.from_list([pressure], nx),
        frame=spec.frame,
    )


def reflect(grid: FieldGrid) -> FieldGrid:
    """Mirror a grid through x ↦ −x.

    u₁ changes sign, u₂ and p are unchanged, and the orientation flips so
    that the frame speed, the forcing and the flux constant change sign too.
    """
    return replace(
        grid,
        x_nodes=-grid.x_nodes[::-1],
        geom=grid.geom.reflected(),
        u1_poly=-grid.u1_poly.reversed_x(),
        u2_poly=grid.u2_poly.reversed_x(),
        p_poly=grid.p_poly.reversed_x(),
        orientation=-grid.orientation,
    )


# -- Diagnostics -------------------------------------------------------------------


def divergence_field(grid: FieldGrid) -> np.ndarray:
    """∇^𝒜·u at the nodes, shape (ny, nx)."""
    geom = grid.geom
    return (geom.d1(grid.u1_poly) + geom.d2(grid.u2_poly)).at(grid.s_nodes)


def divergence_check(grid: FieldGrid, geom: GeometryOps | None = None) -> float:
    """sup over interior nodes of |∇^𝒜·u|."""
    if geom is not None and geom is not grid.geom:
        grid = replace(grid, geom=geom)
    div = divergence_field(grid)
    interior = div[1:-1, 1:-1] if grid.ny > 2 else div[:, 1:-1]
    return float(np.max(np.abs(interior), initial=0.0))


def vorticity(grid: FieldGrid) -> np.ndarray:
    """ω = ∂₁^𝒜u₂ − ∂₂^𝒜u₁ at the nodes (frame independent)."""
    geom = grid.geom
    return (geom.d1(grid.u2_poly) - geom.d2(grid.u1_poly)).at(grid.s_nodes)


def slice_flux(grid: FieldGrid) -> np.ndarray:
    """(ι(4 + ε²γ̄) − ∫₀¹u₁ ds)·ζ on every vertical slice."""
    return (grid.frame_speed - grid.u1_poly.mean()) * grid.zeta


def kinematic_defect(grid: FieldGrid) -> float:
    """sup |εcζ′ + u·𝒩 − ε∂ₓ(slice flux)| on the top boundary."""
    n1, n2 = grid.geom.normal
    flux_normal = grid.u1_poly.top() * n1 + grid.u2_poly.top() * n2
    lhs = grid.eps * grid.frame_speed * grid.geom.dzeta + flux_normal
    rhs = grid.eps * ddx(slice_flux(grid), grid.geom.h)
    return float(np.max(np.abs(lhs - rhs)))


def shallow_water_gap(grid: FieldGrid) -> float:
    """sup over nodes of |u − Ue₁|, the distance from the depth-uniform flow."""
    base = grid.u1_poly.coeffs[0]
    du1 = grid.u1_poly.at(grid.s_nodes) - base
    return float(np.max(np.hypot(du1, grid.u2)))


# -- Streamlines -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Streamline:
    """A traced streamline.

    Attributes:
        x: Horizontal positions.
        s: Scaled heights in [0, 1].
        z: Physical heights εsζ(x) in the fluid domain.
    """

    x: np.ndarray
    s: np.ndarray
    z: np.ndarray


@dataclass(frozen=True, eq=False)
class FlowPicture:
    """Streamline and vorticity data for one grid."""

    x_nodes: np.ndarray
    y_nodes: np.ndarray
    zeta: np.ndarray
    omega: np.ndarray
    streamlines: list[Streamline]


class _TravelingVelocity:
    """Traveling-frame velocity at arbitrary (x, s) from splined coefficients."""

    def __init__(self, grid: FieldGrid) -> None:
        x = grid.x_nodes
        self.speed = grid.frame_speed
        self.eps = grid.eps
        self.u1 = CubicSpline(x, grid.u1_poly.coeffs, axis=1)
        self.u2 = CubicSpline(x, grid.u2_poly.coeffs, axis=1)
        self.zeta = CubicSpline(x, grid.zeta)
        self.dzeta = CubicSpline(x, grid.geom.dzeta)

    @staticmethod
    def _horner(coeffs: np.ndarray, s: float) -> float:
        out = 0.0
        for c in coeffs[::-1]:
            out = out * s + float(c)
        return out

    def __call__(self, x: float, s: float) -> tuple[float, float]:
        """(ẋ, ṡ) for the flattened coordinates of a fluid particle."""
        v1 = self._horner(self.u1(x), s) - self.speed
        v2 = self._horner(self.u2(x), s)
        z, dz = float(self.zeta(x)), float(self.dzeta(x))
        return v1, (v2 / self.eps - s * dz * v1) / z


def trace_streamline(
    grid: FieldGrid,
    seed: tuple[float, float],
    steps_per_width: int = 400,
    max_steps: int = 20000,
    velocity: Any = None,
) -> Streamline:
    """RK4 advection of one seed (x, s) in the traveling-frame velocity.

    The time direction is chosen so the first step moves into the x-range.
    """
    vel = velocity or _TravelingVelocity(grid)
    x_lo, x_hi = float(grid.x_nodes[0]), float(grid.x_nodes[-1])
    x, s = seed
    v1, _ = vel(x, s)
    mid = 0.5 * (x_lo + x_hi)
    inward = 1.0 if x <= mid else -1.0
    direction = inward if v1 * inward >= 0 else -inward
    dx_target = (x_hi - x_lo) / steps_per_width
    xs, ss = [x], [s]
    for _ in range(max_steps):
        v1, _ = vel(x, s)
        dt = direction * dx_target / max(abs(v1), 1e-12)
        k1 = vel(x, s)
        k2 = vel(x + 0.5 * dt * k1[0], _clip01(s + 0.5 * dt * k1[1]))
        k3 = vel(x + 0.5 * dt * k2[0], _clip01(s + 0.5 * dt * k2[1]))
        k4 = vel(x + dt * k3[0], _clip01(s + dt * k3[1]))
        x = x + dt * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) / 6.0
        s = _clip01(s + dt * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) / 6.0)
        if not x_lo <= x <= x_hi:
            break
        xs.append(x)
        ss.append(s)
    x_arr, s_arr = np.array(xs), np.array(ss)
    z = grid.eps * s_arr * vel.zeta(x_arr)
    return Streamline(x=x_arr, s=s_arr, z=z)


def _clip01(s: float) -> float:
    return min(1.0, max(0.0, s))


def seed_column(count: int = DEFAULT_SEEDS, x: float | None = None) -> list[tuple[float | None, float]]:
    """Uniform column of seeds (x, s) with s = (k + ½)/count."""
    return [(x, (k + 0.5) / count) for k in range(count)]


def streamlines_and_vorticity(
    grid: FieldGrid,
    seeds: int | Sequence[tuple[float | None, float]] = DEFAULT_SEEDS,
) -> FlowPicture:
    """Vorticity at the nodes and traveling-frame streamlines.

    Args:
        grid: A reconstructed grid (node frame is irrelevant here).
        seeds: Seed count for a column at the left edge, or explicit (x, s)
            pairs; an x of ``None`` means the left edge.

    Returns:
        The plot data.  Seeds outside the strip are skipped with a warning.
    """
    x_lo, x_hi = float(grid.x_nodes[0]), float(grid.x_nodes[-1])
    pairs = seed_column(seeds) if isinstance(seeds, int) else list(seeds)
    velocity = _TravelingVelocity(grid)
    lines: list[Streamline] = []
    for x, s in pairs:
        x0 = x_lo if x is None else float(x)
        if not (x_lo <= x0 <= x_hi and 0.0 <= s <= 1.0) or not math.isfinite(x0):
            logger.warning("Skipping streamline seed outside the strip x=%s s=%s", x0, s)
            continue
        lines.append(trace_streamline(grid, (x0, float(s)), velocity=velocity))
    return FlowPicture(
        x_nodes=grid.x_nodes,
        y_nodes=grid.y_nodes,
        zeta=grid.zeta,
        omega=vorticity(grid),
        streamlines=lines,
    )
