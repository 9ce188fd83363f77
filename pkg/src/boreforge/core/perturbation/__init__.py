"""Perturbations of the heteroclinic bore orbit."""

from __future__ import annotations

from boreforge.core.perturbation.attractor import attractor_fixed_point
from boreforge.core.perturbation.base import ManifoldView, Perturbation, manifold_view
from boreforge.core.perturbation.bore import (
    PerturbationStudy,
    PerturbedOrbit,
    lipschitz_ratio,
    perturbed_bore,
)
from boreforge.core.perturbation.hyperbolic import (
    Branch,
    FixedPointOpts,
    HyperbolicData,
    hyperbolic_fixed_point,
)
from boreforge.core.perturbation.registry import (
    ConstantShift,
    GaussianBump,
    ZeroPerturbation,
    get_perturbation,
    list_perturbations,
    register_perturbation,
)


__all__ = [
    "Branch",
    "ConstantShift",
    "FixedPointOpts",
    "GaussianBump",
    "HyperbolicData",
    "ManifoldView",
    "PerturbationStudy",
    "PerturbedOrbit",
    "Perturbation",
    "ZeroPerturbation",
    "attractor_fixed_point",
    "get_perturbation",
    "hyperbolic_fixed_point",
    "lipschitz_ratio",
    "list_perturbations",
    "manifold_view",
    "perturbed_bore",
    "register_perturbation",
]
