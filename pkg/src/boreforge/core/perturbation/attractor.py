"""Forward perturbed branch near the attracting equilibrium.

Around the base orbit X₀ the correction y = X − X₀ on [T, ∞) solves

    y′ = J(s)y + R(s, y) + ψ(λ, s, X₀ + y),    y(T) = y_init

with J = D(ιΦ)(X₀(s)) and R the quadratic remainder.  Each iteration solves
the linear equation with the previous iterate frozen inside R and ψ, so the
variation part J(s) − M_a never has to be inverted explicitly.
"""

from __future__ import annotations

import logging
from typing import Any

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from boreforge.core.perturbation.base import Forcing, ManifoldView, time_reversed
from boreforge.core.perturbation.hyperbolic import (
    Branch,
    ContractionMonitor,
    FixedPointOpts,
    check_seed,
)
from boreforge.utils.errors import NumericalError, ParameterError


logger = logging.getLogger(__name__)


def _forward_grid(view: ManifoldView, T: float) -> np.ndarray:
    s = view.s
    if not (s[0] <= T < s[-1]):
        raise ParameterError(
            f"Switch time {T:.6g} outside the orbit's manifold range ({s[0]:.6g}, {s[-1]:.6g})"
        )
    later = s[s > T]
    return np.concatenate([[T], later])


def attractor_fixed_point(
    view: ManifoldView,
    psi: Forcing | None,
    lam: float,
    T: float,
    y_init: Any,
    opts: FixedPointOpts | None = None,
) -> Branch:
    """Perturbed branch on [T, end of the base orbit].

    Args:
        view: The base orbit in manifold time.
        psi: Perturbation ψ₁(λ, t, X) in lab time (``None`` for none).
        lam: Family parameter.
        T: Left end in manifold time.
        y_init: Correction at T.
        opts: Iteration options.

    Returns:
        The branch on the base samples after T; ``reference`` is the base orbit.

    Raises:
        ParameterError: If ‖y_init‖ exceeds the seed limit or T is out of range.
        ContractionError: If the iteration stops contracting.
        NumericalError: If a linear solve fails.
    """
    opts = opts or FixedPointOpts()
    y0 = check_seed(y_init, opts, "y_init")
    s = _forward_grid(view, T)
    base = view.base_at(s)
    forcing = time_reversed(psi, view.orientation) if psi is not None else None
    span = (float(s[0]), float(s[-1]))

    def linearization(t: float) -> tuple[np.ndarray, np.ndarray]:
        X0 = view.base_at(t)
        return X0, view.jacobian(X0)

    y = np.zeros((2, s.size))
    monitor = ContractionMonitor(opts, "attractor")
    while True:
        frozen = CubicSpline(s, y, axis=1) if np.any(y) else None

        def rhs(t: float, z: np.ndarray, frozen: CubicSpline | None = frozen) -> np.ndarray:
            X0, J = linearization(t)
            out = J @ z
            prev = frozen(t) if frozen is not None else np.zeros(2)
            X = X0 + prev
            if frozen is not None:
                out = out + view.field(X) - view.field(X0) - J @ prev
            if forcing is not None:
                out = out + forcing(lam, t, X)
            return out

        sol = solve_ivp(
            rhs,
            span,
            y0,
            method="DOP853",
            t_eval=s,
            rtol=opts.rtol,
            atol=opts.atol,
        )
        if not sol.success:
            raise NumericalError(f"Attractor linear solve failed: {sol.message}")
        y_new = sol.y
        diff = float(np.max(np.abs(y_new - y)))
        y = y_new
        if monitor.update(diff):
            break

    logger.debug(
        "Attractor fixed point iterations=%d ratio=%.3g points=%d",
        monitor.iterations,
        monitor.ratio,
        s.size,
    )
    return Branch(
        s=s,
        x=y,
        reference=base,
        iterations=monitor.iterations,
        contraction_ratio=monitor.ratio,
    )
