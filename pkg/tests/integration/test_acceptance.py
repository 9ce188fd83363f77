"""End-to-end property checks over random parameter sets.

Each test draws its own reproducible sample of (μ, a, g, A) inside the
ebbing or surging region and runs the whole chain from classification to
the reconstructed fields.
"""

from __future__ import annotations

import numpy as np
import pytest

from boreforge.core.fields import GridSpec, divergence_check, reconstruct, vorticity
from boreforge.core.landscape import Chirality, Landscape, Region, classify
from boreforge.core.orbit import (
    ProfileShape,
    ShootOpts,
    count_turns,
    energy_audit,
    profile_shape,
    shoot_heteroclinic,
)
from boreforge.core.params import PhysParams, equilibria, froude
from boreforge.core.profile import build_profile, verify_lienard_equivalence
from boreforge.core.residual import evaluate_residuals, shear_flow_exact


pytestmark = [pytest.mark.slow, pytest.mark.acceptance]


def _random_params(rng: np.random.Generator, region: Region) -> PhysParams:
    A = float(rng.uniform(0.3, 0.85))
    bounds = classify(1.0, A)
    if region is Region.C1:
        g = float(rng.uniform(0.05, 0.9)) * bounds.g_lower
    else:
        g = float(rng.uniform(1.1, 2.0)) * bounds.g_upper
    return PhysParams(
        mu=float(rng.uniform(0.5, 4.0)),
        a=float(rng.uniform(0.5, 2.0)),
        g=g,
        A=A,
        eps=0.1,
    )


def _sample(seed: int, count: int) -> list[PhysParams]:
    rng = np.random.default_rng(seed)
    half = count // 2
    return [_random_params(rng, Region.C1) for _ in range(half)] + [
        _random_params(rng, Region.CMINUS1) for _ in range(count - half)
    ]


RANDOM_SETS = _sample(20240917, 100)


# ── Region map ───────────────────────────────────────────────────────


class TestRegions:
    """Classification reproduces the published region examples."""

    def test_examples(self) -> None:
        assert classify(0.125, 0.770).region is Region.C1
        assert classify(25.0, 0.855).region is Region.CMINUS1
        for A in (0.1, 0.3, 0.5, 0.7, 0.9):
            assert classify(8.0, A).region is Region.EXCLUDED


# ── Orbits and profiles ──────────────────────────────────────────────


class TestRandomOrbits:
    """Shooting, energy, Froude law and the shallow-water residual on random sets."""

    @pytest.mark.parametrize("params", RANDOM_SETS, ids=lambda p: f"g={p.g:.4g},A={p.A:.3f}")
    def test_chain(self, params: PhysParams) -> None:
        landscape = Landscape.build(params)
        orbit = shoot_heteroclinic(params, landscape)
        rho_plus = landscape.eq.rho_plus
        end = -1 if orbit.chirality is Chirality.EBBING else 0
        assert np.hypot(orbit.rho[end] - rho_plus, orbit.rho_prime[end]) < 1e-8
        assert orbit.trap_violation < 1e-6
        assert energy_audit(orbit, landscape).defect < 1e-6

        fr = froude(params)
        assert (orbit.chirality is Chirality.SURGING) == fr.is_subcritical

        report = verify_lienard_equivalence(build_profile(orbit, params))
        assert report.mass <= 1e-10
        assert report.momentum <= 1e-5
        assert report.h_form <= 1e-5


class TestSeedStability:
    """Halving the seed offset leaves the anchored orbit in place."""

    @pytest.mark.parametrize("params", _sample(77, 10), ids=lambda p: f"g={p.g:.4g},A={p.A:.3f}")
    def test_halving(self, params: PhysParams) -> None:
        full = shoot_heteroclinic(params)
        half = shoot_heteroclinic(params, opts=ShootOpts(seed_offset=0.5e-8))
        lo, hi = max(full.t[0], half.t[0]), min(full.t[-1], half.t[-1])
        ts = np.linspace(lo, hi, 2001)
        assert np.max(np.abs(full.interpolant()(ts) - half.interpolant()(ts))) <= 1e-6


# ── Shear flow at full resolution ────────────────────────────────────


class TestShearGolden:
    """The exact shear flow passes every equation on a 256 × 256 grid."""

    @pytest.mark.parametrize("eps", [0.05, 0.1, 0.2])
    @pytest.mark.parametrize("which", ["h_minus", "h_plus"])
    def test_residuals(self, eps: float, which: str) -> None:
        params = PhysParams(mu=2.0, a=1.0, g=0.125, A=0.75, eps=eps)
        H = getattr(equilibria(params.A), which)
        grid = shear_flow_exact(params, H).to_grid(GridSpec(nx=256, ny=256, x_range=(-1.0, 1.0)))
        assert evaluate_residuals(grid, refine=False).max_sup() <= 1e-8
        assert divergence_check(grid) <= 1e-13


# ── Profile shapes ───────────────────────────────────────────────────


SHAPE_SETS = [
    pytest.param(PhysParams(mu=0.5, a=0.1, g=0.125, A=0.77), ProfileShape.OSCILLATORY, id="ebbing-complex"),
    pytest.param(PhysParams(mu=0.25, a=0.05, g=0.125, A=0.75), ProfileShape.MONOTONE, id="ebbing-real"),
    pytest.param(PhysParams(mu=1.0, a=10.0, g=25.0, A=0.9), ProfileShape.OSCILLATORY, id="surging-complex"),
    pytest.param(PhysParams(mu=2.0, a=1.0, g=30.0, A=0.9), ProfileShape.MONOTONE, id="surging-real"),
]


class TestProfileShapes:
    """Complex eigenvalues at ρ₊ give oscillating bores, real ones monotone bores."""

    @pytest.mark.parametrize(("params", "shape"), SHAPE_SETS)
    def test_shape(self, params: PhysParams, shape: ProfileShape) -> None:
        landscape = Landscape.build(params)
        assert profile_shape(landscape) is shape
        orbit = shoot_heteroclinic(params, landscape)
        turns = count_turns(orbit)
        if shape is ProfileShape.OSCILLATORY:
            assert turns >= 2
        else:
            assert turns == 0

    @pytest.mark.parametrize(("params", "shape"), SHAPE_SETS)
    def test_vorticity_is_negative_throughout(self, params: PhysParams, shape: ProfileShape) -> None:
        orbit = shoot_heteroclinic(params)
        grid = reconstruct(build_profile(orbit, params), spec=GridSpec(nx=201, ny=33))
        assert np.all(vorticity(grid)[1:-1, 1:-1] < 0.0)
