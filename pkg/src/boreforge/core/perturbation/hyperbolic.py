"""Bounded solutions near the saddle (ρ₋, 0).

Writing X = h + x around the saddle h, a solution bounded on (−∞, T] of

    x′ = M_h x + N_h(x) + ψ(λ, s, h + x),     Π_u x(T) = x_u

is a fixed point of the variation-of-constants map

    x(s) = e^{(s−T)M_h}x_u − ∫_s^T e^{(s−τ)M_h}Π_u g(τ) dτ + ∫_{−∞}^s e^{(s−τ)M_h}Π_s g(τ) dτ

with g = N_h(x) + ψ.  Both integrals are evaluated in eigen-coordinates by
exponential quadrature against a cubic spline of g on a uniform grid.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import expm
from scipy.signal import lfilter

from boreforge.core.landscape import Landscape
from boreforge.core.perturbation.base import Forcing, time_reversed
from boreforge.utils.errors import ContractionError, ParameterError, SpectrumError


logger = logging.getLogger(__name__)

SEMIGROUP_HORIZON: float = 20.0
WINDOW_RATES: float = 200.0


@dataclass(frozen=True, eq=False)
class HyperbolicData:
    """Linear data at a hyperbolic saddle.

    Attributes:
        location: The saddle h.
        M_h: DΦ at h (in manifold time).
        proj_s: Projection onto the stable eigenspace along the unstable one.
        proj_u: Projection onto the unstable eigenspace along the stable one.
        basis: Columns (e_u, e_s), unit eigenvectors.
        lambda_u: Unstable eigenvalue (> 0).
        lambda_s: Stable eigenvalue (< 0).
        K: Measured semigroup constant.
        alpha: Measured semigroup rate min(λ_u, −λ_s).
        vector_field: The full field in manifold time, (2, n) → (2, n).
        orientation: ι of the time direction the forcing is given in.
    """

    location: np.ndarray
    M_h: np.ndarray
    proj_s: np.ndarray
    proj_u: np.ndarray
    basis: np.ndarray
    lambda_u: float
    lambda_s: float
    K: float
    alpha: float
    vector_field: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    orientation: int = 1

    @classmethod
    def from_matrix(
        cls,
        M: Any,
        location: Any = None,
        field_fn: Callable[[np.ndarray], np.ndarray] | None = None,
        orientation: int = 1,
    ) -> HyperbolicData:
        """Build the data of a real saddle matrix.

        Args:
            M: 2×2 matrix with one positive and one negative eigenvalue.
            location: The saddle (origin by default).
            field_fn: Full field; the linear field M(X − h) by default.
            orientation: Time direction of the forcing.

        Raises:
            SpectrumError: If ``M`` is not a real saddle.
        """
        M = np.asarray(M, dtype=float)
        h = np.zeros(2) if location is None else np.asarray(location, dtype=float)
        vals, vecs = np.linalg.eig(M)
        if np.any(np.abs(vals.imag) > 0):
            raise SpectrumError("Hyperbolic data needs real eigenvalues")
        vals = vals.real
        vecs = vecs.real
        iu, is_ = int(np.argmax(vals)), int(np.argmin(vals))
        if not (vals[iu] > 0 > vals[is_]):
            raise SpectrumError(f"Matrix is not a saddle (eigenvalues {vals[iu]:.6g}, {vals[is_]:.6g})")
        basis = np.column_stack([vecs[:, iu], vecs[:, is_]])
        basis = basis / np.linalg.norm(basis, axis=0)
        inverse = np.linalg.inv(basis)
        proj_u = np.outer(basis[:, 0], inverse[0])
        proj_s = np.outer(basis[:, 1], inverse[1])
        alpha = min(float(vals[iu]), -float(vals[is_]))
        if field_fn is None:

            def field_fn(X: np.ndarray) -> np.ndarray:
                return M @ (X - h.reshape(2, *([1] * (np.ndim(X) - 1))))

        return cls(
            location=h,
            M_h=M,
            proj_s=proj_s,
            proj_u=proj_u,
            basis=basis,
            lambda_u=float(vals[iu]),
            lambda_s=float(vals[is_]),
            K=measure_semigroup(M, proj_s, proj_u, alpha),
            alpha=alpha,
            vector_field=field_fn,
            orientation=orientation,
        )

    @classmethod
    def from_landscape(cls, landscape: Landscape, orientation: int) -> HyperbolicData:
        """Data at (ρ₋, 0) of ι·Φ."""
        rho = landscape.eq.rho_minus
        sign = float(orientation)
        M = sign * np.array([[0.0, 1.0], [float(landscape.dF(rho)), -float(landscape.G(rho))]])

        def field_fn(X: np.ndarray) -> np.ndarray:
            d1, d2 = landscape.field(X[0], X[1])
            return sign * np.array([np.broadcast_to(d1, np.shape(d2)), d2])

        return cls.from_matrix(M, location=[rho, 0.0], field_fn=field_fn, orientation=orientation)

    @property
    def unstable_direction(self) -> np.ndarray:
        """Unit unstable eigenvector."""
        return self.basis[:, 0].copy()

    def projection_defect(self) -> float:
        """max of the defects of Π_s² = Π_s, Π_u² = Π_u, Π_sΠ_u = 0, Π_s + Π_u = I."""
        ps, pu = self.proj_s, self.proj_u
        return float(
            max(
                np.max(np.abs(ps @ ps - ps)),
                np.max(np.abs(pu @ pu - pu)),
                np.max(np.abs(ps @ pu)),
                np.max(np.abs(ps + pu - np.eye(2))),
            )
        )


def measure_semigroup(
    M: np.ndarray,
    proj_s: np.ndarray,
    proj_u: np.ndarray,
    alpha: float,
    horizon: float = SEMIGROUP_HORIZON,
    samples: int = 201,
) -> float:
    """Smallest K with ‖e^{tM}Π_s‖, ‖e^{−tM}Π_u‖ ≤ K e^{−αt} on the sampled [0, horizon]."""
    K = 1.0
    for t in np.linspace(0.0, horizon, samples):
        growth = math.exp(alpha * t)
        K = max(
            K,
            float(np.linalg.norm(expm(t * M) @ proj_s, 2)) * growth,
            float(np.linalg.norm(expm(-t * M) @ proj_u, 2)) * growth,
        )
    return K


# -- Exponential quadrature --------------------------------------------------------


def _phi(j: int, u: float) -> float:
    """φ_j(u) = Σ_m u^m/(m + j)!, with φ₀ = eᵘ."""
    if abs(u) < 0.5:
        return math.fsum(u**m / math.factorial(m + j) for m in range(24))
    value = math.exp(u)
    for i in range(j):
        value = (value - 1.0 / math.factorial(i)) / u
    return value


def duhamel(lam: float, step: float, values: np.ndarray, z0: float) -> np.ndarray:
    """Solve z′ = λz + g on a uniform grid starting from z(0) = z0.

    g is the not-a-knot cubic spline through ``values``; over each step the
    convolution with e^{λ(k−τ)} is integrated exactly.
    """
    n = values.size
    z = np.empty(n)
    z[0] = z0
    if n == 1:
        return z
    spline = CubicSpline(step * np.arange(n), values)
    u = lam * step
    increments = np.zeros(n - 1)
    for j in range(4):
        weight = math.factorial(j) * step ** (j + 1) * _phi(j + 1, u)
        increments += spline.c[3 - j] * weight
    decay = math.exp(u)
    z[1:], _ = lfilter([1.0], [1.0, -decay], increments, zi=[decay * z0])
    return z


# -- Fixed point -------------------------------------------------------------------


@dataclass(frozen=True)
class FixedPointOpts:
    """Options of the fixed-point iterations.

    Attributes:
        step: Uniform quadrature step of the hyperbolic side.
        window: Length of the truncated past, ``None`` for 200/α.
        tol: Sup-norm stopping tolerance between successive iterates.
        max_iter: Iteration budget.
        ratio_limit: Observed contraction ratio that aborts the iteration.
        seed_limit: Largest admissible ‖x_u‖ (or ‖y_init‖).
        rtol: Relative tolerance of the attractor-side linear solves.
        atol: Absolute tolerance of the attractor-side linear solves.
    """

    step: float = 0.01
    window: float | None = None
    tol: float = 1e-10
    max_iter: int = 60
    ratio_limit: float = 0.9
    seed_limit: float = 1e-3
    rtol: float = 1e-11
    atol: float = 1e-14


@dataclass(frozen=True, eq=False)
class Branch:
    """A fixed point sampled on a time grid.

    Attributes:
        s: Increasing manifold times.
        x: Deviation from the reference state, shape (2, n).
        reference: The state the deviation is taken from, shape (2, n).
        iterations: Iterations performed.
        contraction_ratio: Largest observed ratio of successive differences.
    """

    s: np.ndarray
    x: np.ndarray
    reference: np.ndarray
    iterations: int
    contraction_ratio: float

    @property
    def states(self) -> np.ndarray:
        """reference + x."""
        return self.reference + self.x


class ContractionMonitor:
    """Tracks successive iterate differences."""

    def __init__(self, opts: FixedPointOpts, side: str) -> None:
        self.opts = opts
        self.side = side
        self.previous: float | None = None
        self.ratio = 0.0
        self.iterations = 0

    def update(self, diff: float) -> bool:
        """Record one iteration; True once converged."""
        self.iterations += 1
        if diff < self.opts.tol:
            return True
        if self.previous is not None and self.previous > 10.0 * self.opts.tol:
            ratio = diff / self.previous
            self.ratio = max(self.ratio, ratio)
            if ratio >= self.opts.ratio_limit:
                raise ContractionError(
                    f"{self.side} fixed point outside contraction regime (ratio={ratio:.3g})",
                    ratio=ratio,
                )
        if self.iterations >= self.opts.max_iter:
            raise ContractionError(
                f"{self.side} fixed point not converged in {self.iterations} iterations "
                f"(diff={diff:.3e})",
                ratio=self.ratio,
            )
        self.previous = diff
        return False


def check_seed(vector: Any, opts: FixedPointOpts, name: str) -> np.ndarray:
    """Validate a small seed vector."""
    v = np.asarray(vector, dtype=float).reshape(2)
    if not np.all(np.isfinite(v)):
        raise ParameterError(f"{name} must be finite")
    norm = float(np.linalg.norm(v))
    if norm > opts.seed_limit:
        raise ParameterError(f"|{name}|={norm:.3g} exceeds {opts.seed_limit:g}")
    return v


def hyperbolic_fixed_point(
    data: HyperbolicData,
    psi: Forcing | None,
    lam: float,
    T: float,
    x_u: Any,
    opts: FixedPointOpts | None = None,
) -> Branch:
    """Bounded solution on (−∞, T] leaving the saddle.

    Args:
        data: Saddle data.
        psi: Perturbation ψ₁(λ, t, X) in lab time (``None`` for none).
        lam: Family parameter.
        T: Right end in manifold time.
        x_u: Prescribed unstable component at T (only Π_u x_u is used).
        opts: Iteration options.

    Returns:
        The branch on the uniform grid ending at T; ``reference`` is the saddle.

    Raises:
        ParameterError: If ‖x_u‖ exceeds the seed limit.
        ContractionError: If the iteration stops contracting.
    """
    opts = opts or FixedPointOpts()
    x_u = check_seed(x_u, opts, "x_u")
    window = opts.window if opts.window is not None else WINDOW_RATES / data.alpha
    n = max(2, math.ceil(window / opts.step) + 1)
    s = T - opts.step * np.arange(n - 1, -1, -1)
    h = data.location.reshape(2, 1)
    forcing = time_reversed(psi, data.orientation) if psi is not None else None
    inverse = np.linalg.inv(data.basis)
    zu_T = float(inverse[0] @ x_u)

    x = np.outer(data.basis[:, 0], zu_T * np.exp(data.lambda_u * (s - T)))
    monitor = ContractionMonitor(opts, "hyperbolic")
    while True:
        X = h + x
        g = data.vector_field(X) - data.M_h @ x
        if forcing is not None:
            g = g + forcing(lam, s, X)
        gt = inverse @ g
        z_s = duhamel(data.lambda_s, opts.step, gt[1], 0.0)
        z_u = duhamel(-data.lambda_u, opts.step, -gt[0][::-1], zu_T)[::-1]
        x_new = data.basis @ np.vstack([z_u, z_s])
        diff = float(np.max(np.abs(x_new - x)))
        x = x_new
        if monitor.update(diff):
            break

    logger.debug(
        "Hyperbolic fixed point iterations=%d ratio=%.3g points=%d",
        monitor.iterations,
        monitor.ratio,
        n,
    )
    return Branch(
        s=s,
        x=x,
        reference=np.broadcast_to(h, x.shape).copy(),
        iterations=monitor.iterations,
        contraction_ratio=monitor.ratio,
    )
