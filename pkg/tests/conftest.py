"""Shared test fixtures for the Boreforge test suite.

Provides the reference parameter sets, session-scoped orbits and profiles
for one ebbing and one surging bore, and paths to file fixtures.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from boreforge.core.landscape import Landscape
from boreforge.core.orbit import OrbitSolution, shoot_heteroclinic
from boreforge.core.params import PhysParams
from boreforge.core.profile import ShallowProfile, build_profile


# ── Path helpers ─────────────────────────────────────────────────────


FIXTURES_DIR = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture()
def fixtures_dir() -> Path:
    """Return the absolute path to the ``tests/fixtures/`` directory."""
    return FIXTURES_DIR


# ── Parameter sets ───────────────────────────────────────────────────

# Ebbing (C1): H₋ = 1/4, H₊ = 3/4, complex eigenvalues at ρ₊.
EBBING = PhysParams(mu=2.0, a=1.0, g=0.125, A=0.75, eps=0.1)
# Surging (Cminus1): g well above A²/H₋³ ≈ 20.3, real eigenvalues at ρ₊.
SURGING = PhysParams(mu=2.0, a=1.0, g=30.0, A=0.9, eps=0.1)


@pytest.fixture(scope="session")
def ebbing_params() -> PhysParams:
    """Return the reference ebbing parameter set."""
    return EBBING


@pytest.fixture(scope="session")
def surging_params() -> PhysParams:
    """Return the reference surging parameter set."""
    return SURGING


@pytest.fixture(scope="session")
def ebbing_landscape() -> Landscape:
    """Return the landscape of the ebbing set."""
    return Landscape.build(EBBING)


@pytest.fixture(scope="session")
def surging_landscape() -> Landscape:
    """Return the landscape of the surging set."""
    return Landscape.build(SURGING)


# ── Orbits and profiles ──────────────────────────────────────────────


@pytest.fixture(scope="session")
def ebbing_orbit(ebbing_landscape: Landscape) -> OrbitSolution:
    """Return the converged heteroclinic orbit of the ebbing set."""
    return shoot_heteroclinic(EBBING, ebbing_landscape)


@pytest.fixture(scope="session")
def surging_orbit(surging_landscape: Landscape) -> OrbitSolution:
    """Return the converged heteroclinic orbit of the surging set."""
    return shoot_heteroclinic(SURGING, surging_landscape)


@pytest.fixture(scope="session")
def ebbing_profile(ebbing_orbit: OrbitSolution) -> ShallowProfile:
    """Return the shallow-water profile of the ebbing orbit."""
    return build_profile(ebbing_orbit)


@pytest.fixture(scope="session")
def surging_profile(surging_orbit: OrbitSolution) -> ShallowProfile:
    """Return the shallow-water profile of the surging orbit."""
    return build_profile(surging_orbit)
