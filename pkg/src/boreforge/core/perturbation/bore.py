"""Perturbed bore orbits and their Lipschitz dependence on λ.

For every λ the perturbed connecting orbit is assembled from the bounded
branch leaving the saddle (ρ₋, 0) on (−∞, T] and the forward branch near
the attracting equilibrium on [T, ∞), glued at a switch time T where the
base orbit is still close to the saddle.  Corrections B(λ) are measured
against the ψ ≡ 0 run of the same pipeline, so B(λ₀) vanishes identically.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Any

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from boreforge.core.orbit import OrbitSolution
from boreforge.core.perturbation.attractor import attractor_fixed_point
from boreforge.core.perturbation.base import (
    Forcing,
    ManifoldView,
    Perturbation,
    manifold_view,
    time_reversed,
)
from boreforge.core.perturbation.hyperbolic import (
    WINDOW_RATES,
    Branch,
    FixedPointOpts,
    HyperbolicData,
    hyperbolic_fixed_point,
)
from boreforge.utils.errors import GluingError, ParameterError


logger = logging.getLogger(__name__)

SWITCH_TOL: float = 1e-3
GLUE_TOL: float = 1e-6
GLUE_SAMPLES: int = 8
CONTRACTION_CERTIFICATE: float = 2.0 / 3.0

ORBIT_COLUMNS: tuple[str, ...] = ("t", "rho", "rho_prime", "B1", "B2")


@dataclass(frozen=True, eq=False)
class _Glued:
    states: np.ndarray
    iterations: int
    contraction_ratio: float
    mismatch: float
    seam_slope_gap: float


@dataclass(frozen=True, eq=False)
class PerturbedOrbit:
    """One member of the perturbed family.

    Attributes:
        base: The unperturbed orbit.
        lam: Family parameter λ.
        t: Lab times (the base sample times).
        reference: The ψ ≡ 0 run on the same times, shape (n, 2).
        correction: B(λ) = perturbed − reference, shape (n, 2).
        switch_time: Gluing time T in lab time.
        iteration_count: Total fixed-point iterations of both branches.
        contraction_ratio: Largest observed contraction ratio.
        gluing_mismatch: sup distance between the right branch and a free
            integration of the perturbed field from the left limit, over the
            first samples after the switch time.
        seam_slope_gap: |left derivative − field| at the switch time.
    """

    base: OrbitSolution
    lam: float
    t: np.ndarray
    reference: np.ndarray
    correction: np.ndarray
    switch_time: float
    iteration_count: int
    contraction_ratio: float
    gluing_mismatch: float
    seam_slope_gap: float

    @property
    def states(self) -> np.ndarray:
        """Perturbed (ρ, ρ′) samples, shape (n, 2)."""
        return self.reference + self.correction

    @property
    def sup_correction(self) -> float:
        """‖B(λ)‖_sup."""
        return float(np.max(np.abs(self.correction))) if self.correction.size else 0.0

    @property
    def endpoint_shift(self) -> float:
        """ρ-correction at the (ρ₊, 0) end."""
        index = -1 if self.base.chirality.iota == 1 else 0
        return float(self.correction[index, 0])

    def rows(self) -> list[dict[str, float]]:
        """CSV rows keyed by :data:`ORBIT_COLUMNS`."""
        X = self.states
        return [
            {
                "t": float(t),
                "rho": float(x[0]),
                "rho_prime": float(x[1]),
                "B1": float(b[0]),
                "B2": float(b[1]),
            }
            for t, x, b in zip(self.t, X, self.correction, strict=True)
        ]

    def summary(self) -> dict[str, Any]:
        """JSON summary of this member."""
        return {
            "lambda": self.lam,
            "sup_correction": self.sup_correction,
            "endpoint_shift": self.endpoint_shift,
            "iterations": self.iteration_count,
            "contraction_ratio": self.contraction_ratio,
            "gluing_mismatch": self.gluing_mismatch,
            "seam_slope_gap": self.seam_slope_gap,
        }


@dataclass(frozen=True, eq=False)
class PerturbationStudy:
    """The perturbed family over a finite λ set.

    Attributes:
        base: The unperturbed orbit.
        data: Saddle data in manifold time.
        perturbation: The family.
        switch_time: Gluing time in lab time.
        reference: ψ ≡ 0 run of the pipeline, shape (n, 2).
        members: One perturbed orbit per λ, in input order.
        lipschitz_ratio: sup over pairs of ‖B(λ) − B(λ̃)‖_sup/|λ − λ̃|.
    """

    base: OrbitSolution
    data: HyperbolicData
    perturbation: Perturbation | None
    switch_time: float
    reference: np.ndarray
    members: list[PerturbedOrbit]
    lipschitz_ratio: float | None

    @property
    def reference_gap(self) -> float:
        """sup |reference − base orbit|."""
        return float(np.max(np.abs(self.reference - self.base.states)))

    def summary(self) -> dict[str, Any]:
        """JSON summary of the study."""
        family = self.perturbation.describe() if self.perturbation is not None else {}
        return {
            "perturbation": family,
            "switch_time": self.switch_time,
            "lipschitz_ratio": self.lipschitz_ratio,
            "reference_gap": self.reference_gap,
            "K": self.data.K,
            "alpha": self.data.alpha,
            "members": [m.summary() for m in self.members],
        }


def switch_index(
    view: ManifoldView, data: HyperbolicData, tol: float = SWITCH_TOL
) -> int:
    """Last manifold sample before which the base orbit stays within ``tol`` of the saddle.

    Both |X₀ − h| and |Π_u(X₀ − h)| are required to stay below ``tol``.

    Raises:
        ParameterError: If even the first sample is too far from the saddle.
    """
    dev = view.X - data.location.reshape(2, 1)
    dist = np.maximum(np.linalg.norm(dev, axis=0), np.linalg.norm(data.proj_u @ dev, axis=0))
    outside = np.flatnonzero(dist > tol)
    k = int(outside[0]) - 1 if outside.size else view.s.size - 2
    if k < 0:
        raise ParameterError(f"Base orbit starts farther than {tol:g} from the saddle")
    return min(k, view.s.size - 2)


def seam_drift(
    view: ManifoldView,
    psi: Forcing | None,
    lam: float,
    start: np.ndarray,
    branch: Branch,
    opts: FixedPointOpts,
    samples: int = GLUE_SAMPLES,
) -> float:
    """sup distance between ``branch`` and the perturbed flow started at ``start``.

    The flow X′ = ιΦ(X) + ψ is integrated directly from the first time of
    ``branch`` over its first ``samples`` times.  A converged attractor
    branch solves the same equation, so the drift stays at discretization
    level unless the branch is wrong.
    """
    s = branch.s[: max(samples, 1)]
    if s.size < 2:
        return 0.0
    forcing = time_reversed(psi, view.orientation) if psi is not None else None

    def rhs(t: float, X: np.ndarray) -> np.ndarray:
        out = view.field(X)
        if forcing is not None:
            out = out + forcing(lam, t, X)
        return out

    sol = solve_ivp(
        rhs,
        (float(s[0]), float(s[-1])),
        np.asarray(start, dtype=float),
        method="DOP853",
        t_eval=s,
        rtol=opts.rtol,
        atol=opts.atol,
    )
    if not sol.success:
        return math.inf
    return float(np.max(np.linalg.norm(sol.y - branch.states[:, : s.size], axis=0)))


def _glue(
    view: ManifoldView,
    data: HyperbolicData,
    psi: Forcing | None,
    lam: float,
    k: int,
    opts: FixedPointOpts,
) -> _Glued:
    s = view.s
    T = float(s[k])
    h = data.location
    x_u = data.proj_u @ (view.X[:, k] - h)
    window = max(WINDOW_RATES / data.alpha, T - float(s[0]) + 10.0 * opts.step)
    hyper = hyperbolic_fixed_point(data, psi, lam, T, x_u, replace(opts, window=window))
    left_spline = CubicSpline(hyper.s, hyper.states, axis=1)
    left = left_spline(s[:k])
    left_limit = hyper.states[:, -1]

    attr = attractor_fixed_point(view, psi, lam, T, left_limit - view.X[:, k], opts)
    right = attr.states
    mismatch = seam_drift(view, psi, lam, left_limit, attr, opts)
    if not math.isfinite(mismatch) or mismatch > GLUE_TOL:
        raise GluingError(
            f"Attractor branch drifts from the perturbed flow after T={T:.6g} (mismatch={mismatch:.3e})",
            mismatch=mismatch,
        )

    slope = view.field(left_limit)
    if psi is not None:
        slope = slope + time_reversed(psi, view.orientation)(lam, T, left_limit)
    seam_gap = float(np.linalg.norm(left_spline(T, 1) - slope))
    return _Glued(
        states=np.hstack([left, right]),
        iterations=hyper.iterations + attr.iterations,
        contraction_ratio=max(hyper.contraction_ratio, attr.contraction_ratio),
        mismatch=mismatch,
        seam_slope_gap=seam_gap,
    )


def _to_lab(view: ManifoldView, states: np.ndarray) -> np.ndarray:
    out = states.T
    return out[::-1].copy() if view.orientation == -1 else out.copy()


def lipschitz_ratio(lams: Sequence[float], corrections: Sequence[np.ndarray]) -> float | None:
    """sup over distinct pairs of ‖B(λ) − B(λ̃)‖_sup/|λ − λ̃|, ``None`` without a pair."""
    best: float | None = None
    for i in range(len(lams)):
        for j in range(i + 1, len(lams)):
            dist = abs(lams[i] - lams[j])
            if dist == 0:
                continue
            ratio = float(np.max(np.abs(corrections[i] - corrections[j]))) / dist
            best = ratio if best is None else max(best, ratio)
    return best


def perturbed_bore(
    orbit: OrbitSolution,
    psi: Perturbation | Forcing | None,
    lambdas: Sequence[float],
    opts: FixedPointOpts | None = None,
    workers: int = 1,
) -> PerturbationStudy:
    """Perturbed connecting orbits for every λ in ``lambdas``.

    Args:
        orbit: The base heteroclinic orbit.
        psi: Perturbation ψ₁(λ, t, X) in lab time; must be pure and reentrant.
        lambdas: The finite λ family.
        opts: Fixed-point options shared by both branches.
        workers: Threads used across λ values.

    Returns:
        The study with per-λ orbits and the empirical Lipschitz ratio.

    Raises:
        ParameterError: If ``lambdas`` is empty.
        ContractionError: If some λ leaves the contraction regime.
        GluingError: If the branches disagree at the switch time.
    """
    if len(lambdas) == 0:
        raise ParameterError("At least one lambda value is required")
    opts = opts or FixedPointOpts()
    view = manifold_view(orbit)
    data = HyperbolicData.from_landscape(orbit.landscape, view.orientation)
    k = switch_index(view, data)
    switch_time = float(view.to_lab_times(view.s[k]))
    reference = _glue(view, data, None, 0.0, k, opts)
    ref_states = _to_lab(view, reference.states)
    logger.info(
        "Perturbation reference run switch_time=%.6g gap=%.3e",
        switch_time,
        float(np.max(np.abs(ref_states - orbit.states))),
    )

    def solve(lam: float) -> PerturbedOrbit:
        glued = _glue(view, data, psi, float(lam), k, opts)
        correction = _to_lab(view, glued.states) - ref_states
        if glued.contraction_ratio >= CONTRACTION_CERTIFICATE:
            logger.warning(
                "Contraction ratio above certificate lambda=%.6g ratio=%.3g",
                lam,
                glued.contraction_ratio,
            )
        return PerturbedOrbit(
            base=orbit,
            lam=float(lam),
            t=orbit.t.copy(),
            reference=ref_states,
            correction=correction,
            switch_time=switch_time,
            iteration_count=glued.iterations,
            contraction_ratio=glued.contraction_ratio,
            gluing_mismatch=glued.mismatch,
            seam_slope_gap=glued.seam_slope_gap,
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            members = list(pool.map(solve, lambdas))
    else:
        members = [solve(lam) for lam in lambdas]

    ratio = lipschitz_ratio([m.lam for m in members], [m.correction for m in members])
    for m in members:
        logger.info(
            "Perturbed orbit lambda=%.6g sup_correction=%.3e iterations=%d",
            m.lam,
            m.sup_correction,
            m.iteration_count,
        )
    return PerturbationStudy(
        base=orbit,
        data=data,
        perturbation=psi if isinstance(psi, Perturbation) else None,
        switch_time=switch_time,
        reference=ref_states,
        members=members,
        lipschitz_ratio=ratio,
    )
