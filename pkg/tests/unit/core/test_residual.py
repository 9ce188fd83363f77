"""Tests for the Navier-Stokes residual evaluation."""

from __future__ import annotations

import math

import numpy as np
import pytest

from boreforge.core.fields import FieldGrid, GridSpec, reconstruct, reflect
from boreforge.core.params import PhysParams, equilibria
from boreforge.core.profile import ShallowProfile
from boreforge.core.residual import (
    SWEEP_COLUMNS,
    Norms,
    coarsen,
    epsilon_sweep,
    evaluate_residuals,
    fitted_order,
    flux_equivalence_gap,
    shear_flow_exact,
)
from boreforge.utils.errors import ParameterError


WINDOW = (-6.0, 6.0)


@pytest.fixture(scope="module")
def ebbing_grid(ebbing_profile: ShallowProfile) -> FieldGrid:
    return reconstruct(ebbing_profile, spec=GridSpec(nx=129, ny=9, x_range=WINDOW))


# ── Norms and orders ─────────────────────────────────────────────────


class TestNorms:
    """Tests for the grid norms."""

    def test_rms_and_sup(self) -> None:
        n = Norms.of(np.array([3.0, -4.0]))
        assert n.l2 == pytest.approx(math.sqrt(12.5))
        assert n.sup == 4.0

    def test_empty(self) -> None:
        assert Norms.of(np.array([])) == Norms(0.0, 0.0)


class TestFittedOrder:
    """Tests for fitted_order."""

    def test_first_order(self) -> None:
        assert fitted_order(1e-2, 1e-3, 0.1, 0.01) == pytest.approx(1.0)

    def test_second_order(self) -> None:
        assert fitted_order(4.0, 1.0, 0.2, 0.1) == pytest.approx(2.0)

    @pytest.mark.parametrize(("r_a", "r_b", "eps_a", "eps_b"), [(0.0, 1.0, 0.2, 0.1), (1.0, 1.0, 0.1, 0.1)])
    def test_degenerate_is_nan(self, r_a: float, r_b: float, eps_a: float, eps_b: float) -> None:
        assert math.isnan(fitted_order(r_a, r_b, eps_a, eps_b))


# ── Exact shear flow ─────────────────────────────────────────────────


class TestShearFlow:
    """The constant-height shear equilibrium satisfies every equation."""

    @pytest.mark.parametrize("which", ["h_minus", "h_plus"])
    def test_residuals_vanish(self, which: str, ebbing_params: PhysParams) -> None:
        H = getattr(equilibria(ebbing_params.A), which)
        report = evaluate_residuals(shear_flow_exact(ebbing_params, H).to_grid(), refine=False)
        assert report.max_sup() <= 1e-8

    def test_surging_end_state(self, surging_params: PhysParams) -> None:
        H = equilibria(surging_params.A).h_plus
        report = evaluate_residuals(shear_flow_exact(surging_params, H).to_grid(), refine=False)
        assert report.max_sup() <= 1e-8

    def test_off_equilibrium_only_breaks_flux(self, ebbing_params: PhysParams) -> None:
        report = evaluate_residuals(shear_flow_exact(ebbing_params, 0.5).to_grid(), refine=False)
        assert report.momentum1.sup <= 1e-8
        assert report.slip_bc.sup <= 1e-8
        assert report.flux_plain.sup > 1e-3

    def test_profile_and_pressure(self, ebbing_params: PhysParams) -> None:
        shear = shear_flow_exact(ebbing_params, 0.75)
        assert shear.b(0.0) == pytest.approx(3.0)
        assert shear.pressure == pytest.approx(0.125 * 0.75)

    @pytest.mark.parametrize("H", [0.0, -1.0, math.nan])
    def test_rejects_bad_height(self, H: float, ebbing_params: PhysParams) -> None:
        with pytest.raises(ParameterError, match="positive"):
            shear_flow_exact(ebbing_params, H)


# ── Reconstructed bores ──────────────────────────────────────────────


class TestEvaluateResiduals:
    """Tests for evaluate_residuals on the ebbing bore."""

    def test_report_is_finite(self, ebbing_grid: FieldGrid) -> None:
        report = evaluate_residuals(ebbing_grid)
        assert math.isfinite(report.max_sup())
        assert report.field_scale > 0
        assert report.impermeability == 0.0
        assert report.converged is not None

    def test_divergence_is_discretization_level(self, ebbing_grid: FieldGrid) -> None:
        assert evaluate_residuals(ebbing_grid, refine=False).divergence <= 1e-4

    def test_mirror_invariance(self, ebbing_grid: FieldGrid) -> None:
        direct = evaluate_residuals(ebbing_grid, refine=False)
        mirrored = evaluate_residuals(reflect(ebbing_grid), refine=False)
        assert mirrored.momentum1.l2 == pytest.approx(direct.momentum1.l2, rel=1e-6)
        assert mirrored.stress_bc2.l2 == pytest.approx(direct.stress_bc2.l2, rel=1e-6)
        assert mirrored.flux_plain.sup == pytest.approx(direct.flux_plain.sup, rel=1e-6, abs=1e-12)

    def test_sigma_override(self, ebbing_grid: FieldGrid, ebbing_params: PhysParams) -> None:
        base = evaluate_residuals(ebbing_grid, refine=False)
        tense = evaluate_residuals(ebbing_grid, params=ebbing_params.with_sigma(50.0), refine=False)
        assert tense.stress_bc2.l2 != pytest.approx(base.stress_bc2.l2)

    def test_to_dict(self, ebbing_grid: FieldGrid) -> None:
        data = evaluate_residuals(ebbing_grid).to_dict()
        assert data["eps"] == 0.1
        assert set(data["momentum1"]) == {"l2", "sup"}
        assert "relative_sup" in data
        assert isinstance(data["converged"], bool)

    def test_flux_equivalence_gap_is_finite(self, ebbing_grid: FieldGrid) -> None:
        assert math.isfinite(flux_equivalence_gap(ebbing_grid))


class TestCoarsen:
    """Tests for the refinement helpers."""

    def test_halves_the_nodes(self, ebbing_grid: FieldGrid) -> None:
        coarse = coarsen(ebbing_grid)
        assert coarse.nx == 65
        assert coarse.geom.h == pytest.approx(2.0 * ebbing_grid.geom.h)
        assert np.array_equal(coarse.x_nodes, ebbing_grid.x_nodes[::2])

    def test_constant_state_is_converged(self, ebbing_params: PhysParams) -> None:
        H = equilibria(ebbing_params.A).h_plus
        report = evaluate_residuals(shear_flow_exact(ebbing_params, H).to_grid())
        assert report.converged is True
        assert report.refinement_change == 0.0


# ── ε-scaling ────────────────────────────────────────────────────────


@pytest.mark.slow
class TestEpsilonSweep:
    """Tests for the ε-scaling study."""

    def test_residual_decays_at_least_linearly(self, ebbing_profile: ShallowProfile) -> None:
        sweep = epsilon_sweep(ebbing_profile, [0.2, 0.1, 0.05], GridSpec(nx=257, ny=17, x_range=WINDOW))
        assert len(sweep.rows) == 3
        assert math.isnan(sweep.rows[0].fitted_order)
        norms = [row.report.momentum1.l2 for row in sweep.rows]
        assert norms[0] > norms[1] > norms[2]
        assert sweep.min_order >= 1.0
        assert sweep.overall_order >= 1.0

    def test_rows_match_columns(self, ebbing_profile: ShallowProfile) -> None:
        sweep = epsilon_sweep(ebbing_profile, [0.1], GridSpec(nx=65, ny=5, x_range=WINDOW))
        assert tuple(sweep.rows[0].as_row()) == SWEEP_COLUMNS
        assert math.isnan(sweep.overall_order)
