"""Perturbation interface.

A perturbation ψ₁(λ, t, X) is added to the Liénard field Φ(X) to give the
nonautonomous system X′ = Φ(X) + ψ₁(λ, t, X).  Implementations must be pure
and reentrant: the λ-family is evaluated concurrently.
"""

from __future__ import annotations

import abc
import logging
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from boreforge.core.landscape import Landscape
from boreforge.core.orbit import OrbitSolution


logger = logging.getLogger(__name__)


class Perturbation(abc.ABC):
    """Abstract base for perturbation families ψ₁(λ, t, X).

    Subclasses implement :meth:`evaluate`; the returned forcing must vanish
    identically at :attr:`null_parameter`.
    """

    name: str = "perturbation"

    @abc.abstractmethod
    def evaluate(self, lam: float, t: np.ndarray, X: np.ndarray) -> np.ndarray:
        """Forcing at times ``t`` (shape (n,)) and states ``X`` (shape (2, n)).

        Returns:
            Array of shape (2, n).
        """

    @property
    def null_parameter(self) -> float:
        """λ₀ with ψ₁(λ₀, ·, ·) ≡ 0."""
        return 0.0

    def sup_bound(self, lam: float) -> float:
        """Declared bound on sup |ψ₁(λ, ·, ·)|."""
        return float("inf")

    def params(self) -> dict[str, Any]:
        """Family parameters for reports."""
        return {}

    def __call__(self, lam: float, t: Any, X: Any) -> np.ndarray:
        """Evaluate on scalars or arrays; the output matches the shape of ``X``."""
        states = np.asarray(X, dtype=float)
        single = states.ndim == 1
        states = states.reshape(2, -1)
        times = np.broadcast_to(np.asarray(t, dtype=float), states.shape[1:])
        out = np.asarray(self.evaluate(float(lam), times, states), dtype=float)
        return out[:, 0] if single else out

    def describe(self) -> dict[str, Any]:
        """Name and parameters."""
        return {"family": self.name, **self.params()}


Forcing = Callable[[float, Any, Any], np.ndarray]


def time_reversed(perturbation: Forcing, orientation: int) -> Forcing:
    """ψ in manifold time s = ι·t: (λ, s, X) ↦ ι·ψ₁(λ, ι·s, X)."""
    sign = float(orientation)

    def forcing(lam: float, s: Any, X: Any) -> np.ndarray:
        return sign * perturbation(lam, sign * np.asarray(s, dtype=float), X)

    return forcing


# -- Manifold time -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ManifoldView:
    """A base orbit in manifold time s = ι·t.

    In s the orbit always leaves the saddle (ρ₋, 0) at s → −∞ and enters the
    attracting equilibrium (ρ₊, 0) of ι·Φ at s → +∞.

    Attributes:
        landscape: The landscape of the orbit.
        orientation: ι, +1 for ebbing and −1 for surging.
        s: Increasing manifold times of the samples.
        X: Samples, shape (2, n).
        spline: C¹ interpolant of X in s.
    """

    landscape: Landscape
    orientation: int
    s: np.ndarray
    X: np.ndarray
    spline: CubicHermiteSpline

    def field(self, X: np.ndarray) -> np.ndarray:
        """ι·Φ(X) for X of shape (2, ...)."""
        d1, d2 = self.landscape.field(X[0], X[1])
        return float(self.orientation) * np.array([np.broadcast_to(d1, np.shape(d2)), d2])

    def jacobian(self, X: np.ndarray) -> np.ndarray:
        """ι·DΦ(X) for a single state X."""
        rho, v = float(X[0]), float(X[1])
        ls = self.landscape
        row = [float(ls.dF(rho)) - float(ls.dG(rho)) * v, -float(ls.G(rho))]
        return float(self.orientation) * np.array([[0.0, 1.0], row])

    def base_at(self, s: Any) -> np.ndarray:
        """Base state at manifold times ``s``, shape (2, ...)."""
        return np.moveaxis(np.asarray(self.spline(s)), -1, 0)

    def to_lab_times(self, s: np.ndarray) -> np.ndarray:
        """t = ι·s."""
        return float(self.orientation) * np.asarray(s)


def manifold_view(orbit: OrbitSolution) -> ManifoldView:
    """Re-express ``orbit`` in manifold time."""
    iota = orbit.chirality.iota
    if iota == 1:
        s, states = orbit.t.copy(), orbit.states
    else:
        s, states = -orbit.t[::-1], orbit.states[::-1]
    X = np.ascontiguousarray(states.T)
    d1, d2 = orbit.landscape.field(X[0], X[1])
    dX = float(iota) * np.column_stack([d1, d2])
    spline = CubicHermiteSpline(s, X.T, dX, axis=0)
    return ManifoldView(landscape=orbit.landscape, orientation=iota, s=s, X=X, spline=spline)
