"""Built-in perturbation families and their registry."""

from __future__ import annotations

import logging
import math
from typing import Any

import numpy as np

from boreforge.core.perturbation.base import Perturbation
from boreforge.utils.errors import ParameterError


logger = logging.getLogger(__name__)


class GaussianBump(Perturbation):
    """ψ₁ = λ·exp(−(t − t₀)²/w²)·(0, 1)."""

    name = "gaussian_bump"

    def __init__(self, t0: float = 0.0, width: float = 1.0) -> None:
        if not (math.isfinite(width) and width > 0):
            raise ParameterError(f"Bump width must be positive, got {width!r}")
        self.t0 = float(t0)
        self.width = float(width)

    def evaluate(self, lam: float, t: np.ndarray, X: np.ndarray) -> np.ndarray:
        out = np.zeros_like(X)
        out[1] = lam * np.exp(-(((t - self.t0) / self.width) ** 2))
        return out

    def sup_bound(self, lam: float) -> float:
        return abs(lam)

    def params(self) -> dict[str, Any]:
        return {"t0": self.t0, "width": self.width}


class ConstantShift(Perturbation):
    """ψ₁ = λ·(0, c); moves the equilibria to the roots of F + λc."""

    name = "constant"

    def __init__(self, c: float = 1.0) -> None:
        self.c = float(c)

    def evaluate(self, lam: float, t: np.ndarray, X: np.ndarray) -> np.ndarray:
        out = np.zeros_like(X)
        out[1] = lam * self.c
        return out

    def sup_bound(self, lam: float) -> float:
        return abs(lam * self.c)

    def params(self) -> dict[str, Any]:
        return {"c": self.c}


class ZeroPerturbation(Perturbation):
    """ψ₁ ≡ 0."""

    name = "zero"

    def evaluate(self, lam: float, t: np.ndarray, X: np.ndarray) -> np.ndarray:
        return np.zeros_like(X)

    def sup_bound(self, lam: float) -> float:
        return 0.0


PERTURBATION_REGISTRY: dict[str, type[Perturbation]] = {
    GaussianBump.name: GaussianBump,
    ConstantShift.name: ConstantShift,
    ZeroPerturbation.name: ZeroPerturbation,
}


def register_perturbation(family: str, cls: type[Perturbation]) -> None:
    """Register a perturbation class under ``family``.

    Raises:
        ValueError: If ``family`` is already registered.
    """
    if family in PERTURBATION_REGISTRY:
        raise ValueError(f"Perturbation family already registered: {family}")
    PERTURBATION_REGISTRY[family] = cls
    logger.info("Perturbation family registered family=%s", family)


def get_perturbation(family: str, **kwargs: Any) -> Perturbation:
    """Instantiate a registered family.

    Args:
        family: Registry key.
        **kwargs: Constructor arguments of the family.

    Raises:
        ValueError: If ``family`` is unknown.
    """
    cls = PERTURBATION_REGISTRY.get(family)
    if cls is None:
        raise ValueError(f"Unknown perturbation family: {family}")
    return cls(**kwargs)


def list_perturbations() -> list[str]:
    """Sorted registered family names."""
    return sorted(PERTURBATION_REGISTRY)
