"""Tests for the field reconstruction and its diagnostics."""

from __future__ import annotations

import logging

import numpy as np
import pytest

from boreforge.core.fields import (
    FieldGrid,
    Frame,
    GridSpec,
    SPoly,
    ddx,
    default_window,
    divergence_check,
    divergence_field,
    kinematic_defect,
    reconstruct,
    reflect,
    shallow_water_gap,
    slice_flux,
    streamlines_and_vorticity,
    vorticity,
)
from boreforge.core.params import PhysParams
from boreforge.core.profile import ShallowProfile
from boreforge.core.residual import shear_flow_exact
from boreforge.utils.errors import GridDomainError


WINDOW = (-6.0, 6.0)


@pytest.fixture(scope="module")
def ebbing_grid(ebbing_profile: ShallowProfile) -> FieldGrid:
    return reconstruct(ebbing_profile, spec=GridSpec(nx=97, ny=9, x_range=WINDOW))


@pytest.fixture()
def shear_grid(ebbing_params: PhysParams) -> FieldGrid:
    return shear_flow_exact(ebbing_params, 0.5).to_grid()


# ── Finite differences and polynomials ───────────────────────────────


class TestDdx:
    """Tests for the fourth-order x-derivative."""

    def test_exact_on_quartics(self) -> None:
        x = np.linspace(-1.0, 2.0, 11)
        f = x**4 - 2.0 * x**3 + x
        assert np.allclose(ddx(f, x[1] - x[0]), 4.0 * x**3 - 6.0 * x**2 + 1.0, atol=1e-9)

    def test_acts_on_last_axis(self) -> None:
        x = np.linspace(0.0, 1.0, 9)
        stacked = np.vstack([x, x**2])
        out = ddx(stacked, x[1] - x[0])
        assert out.shape == (2, 9)
        assert np.allclose(out[1], 2.0 * x)

    def test_needs_five_nodes(self) -> None:
        with pytest.raises(GridDomainError, match="at least 5"):
            ddx(np.zeros(4), 0.1)


class TestSPoly:
    """Tests for polynomials in the scaled height."""

    def test_evaluation(self) -> None:
        p = SPoly.from_list([1.0, 2.0, 3.0], 4)
        assert np.allclose(p.at(0.5), 2.75)
        assert np.allclose(p.top(), 6.0)
        assert np.allclose(p.bottom(), 1.0)
        assert np.allclose(p.mean(), 3.0)

    def test_ds_is_exact(self) -> None:
        p = SPoly.from_list([1.0, 2.0, 3.0], 3)
        assert np.allclose(p.ds().coeffs, [[2.0] * 3, [6.0] * 3])

    def test_sum_pads_degrees(self) -> None:
        p = SPoly.from_list([1.0], 3) + SPoly.from_list([0.0, 0.0, 1.0], 3)
        assert p.degree == 2
        assert np.allclose(p.at([0.0, 1.0]), [[1.0] * 3, [2.0] * 3])

    def test_reversed_x(self) -> None:
        p = SPoly.from_list([np.arange(5.0)], 5)
        assert np.array_equal(p.reversed_x().coeffs[0], np.arange(5.0)[::-1])


# ── Grids ────────────────────────────────────────────────────────────


class TestGridSpec:
    """Tests for grid validation."""

    @pytest.mark.parametrize(
        ("kwargs", "match"),
        [
            ({"nx": 4}, "nx"),
            ({"ny": 1}, "ny"),
            ({"x_range": (1.0, 1.0)}, "Empty x_range"),
        ],
    )
    def test_rejects_degenerate(self, kwargs: dict, match: str) -> None:
        with pytest.raises(GridDomainError, match=match):
            GridSpec(**kwargs)


class TestReconstruct:
    """Tests for reconstruct."""

    def test_shapes(self, ebbing_grid: FieldGrid) -> None:
        assert ebbing_grid.u1.shape == (9, 97)
        assert ebbing_grid.u2.shape == (9, 97)
        assert ebbing_grid.p.shape == (9, 97)
        assert ebbing_grid.y_nodes[-1] == pytest.approx(ebbing_grid.eps)

    def test_frames_differ_by_wave_speed(self, ebbing_grid: FieldGrid) -> None:
        lab = ebbing_grid.with_frame(Frame.LAB)
        assert np.allclose(lab.u1 - ebbing_grid.u1, ebbing_grid.frame_speed)
        assert ebbing_grid.frame_speed == pytest.approx(4.0 + 0.01 * ebbing_grid.tuned.gamma_bar)

    def test_bottom_is_impermeable(self, ebbing_grid: FieldGrid) -> None:
        assert np.all(ebbing_grid.u2[0] == 0.0)

    def test_free_surface_is_height(self, ebbing_grid: FieldGrid, ebbing_profile: ShallowProfile) -> None:
        assert np.allclose(ebbing_grid.zeta, ebbing_profile.H(ebbing_grid.x_nodes), rtol=1e-6)

    def test_outside_orbit_rejected(self, ebbing_profile: ShallowProfile) -> None:
        hi = ebbing_profile.t_range[1]
        with pytest.raises(GridDomainError):
            reconstruct(ebbing_profile, spec=GridSpec(nx=9, ny=3, x_range=(0.0, hi + 5.0)))

    def test_default_window(self, ebbing_profile: ShallowProfile) -> None:
        lo, hi = default_window(ebbing_profile.orbit)
        t0, t1 = ebbing_profile.t_range
        assert t0 <= lo < hi <= t1

    def test_to_dict_keys(self, ebbing_grid: FieldGrid) -> None:
        data = ebbing_grid.to_dict()
        assert set(data) == {"frame", "x_nodes", "y_nodes", "zeta", "u1", "u2", "p", "omega"}
        assert data["frame"] == "traveling"


# ── Diagnostics ──────────────────────────────────────────────────────


class TestDivergence:
    """Tests for the incompressibility check."""

    def test_constant_state_is_divergence_free(self, shear_grid: FieldGrid) -> None:
        assert divergence_check(shear_grid) <= 1e-13

    def test_fourth_order_under_refinement(self, ebbing_profile: ShallowProfile) -> None:
        coarse = reconstruct(ebbing_profile, spec=GridSpec(nx=97, ny=5, x_range=WINDOW))
        fine = reconstruct(ebbing_profile, spec=GridSpec(nx=193, ny=5, x_range=WINDOW))
        ratio = divergence_check(coarse) / divergence_check(fine)
        assert ratio >= 2.0**3.5

    def test_leading_only_fields_also_conserve_mass(self, ebbing_profile: ShallowProfile) -> None:
        grid = reconstruct(ebbing_profile, spec=GridSpec(nx=193, ny=5, x_range=WINDOW, leading_only=True))
        assert divergence_check(grid) <= 1e-4


class TestVorticity:
    """Tests for the vorticity."""

    def test_shear_flow_closed_form(self, shear_grid: FieldGrid, ebbing_params: PhysParams) -> None:
        H, eps = 0.5, ebbing_params.eps
        s = shear_grid.s_nodes[:, None]
        expected = -4.0 * (ebbing_params.a / ebbing_params.mu) * H * eps * (1.0 - s)
        assert np.allclose(vorticity(shear_grid), np.broadcast_to(expected, (shear_grid.ny, shear_grid.nx)))

    def test_frame_independent(self, ebbing_grid: FieldGrid) -> None:
        lab = ebbing_grid.with_frame(Frame.LAB)
        assert np.array_equal(vorticity(lab), vorticity(ebbing_grid))


class TestBoundaryDiagnostics:
    """Tests for the slice flux and kinematic condition."""

    def test_shear_slice_flux_is_relative_flux(self, ebbing_params: PhysParams) -> None:
        shear = shear_flow_exact(ebbing_params, 0.5)
        assert np.allclose(slice_flux(shear.to_grid()), shear.relative_flux, rtol=1e-12)

    def test_shear_kinematic_defect(self, shear_grid: FieldGrid) -> None:
        assert kinematic_defect(shear_grid) <= 1e-12

    def test_reconstructed_kinematic_defect_is_small(self, ebbing_grid: FieldGrid) -> None:
        assert kinematic_defect(ebbing_grid) <= 1e-3

    def test_shallow_water_gap_is_linear_in_eps(
        self, ebbing_profile: ShallowProfile, ebbing_params: PhysParams
    ) -> None:
        spec = GridSpec(nx=33, ny=5, x_range=WINDOW, leading_only=True)
        gaps = [
            shallow_water_gap(reconstruct(ebbing_profile, ebbing_params.with_eps(eps), spec))
            for eps in (0.1, 0.05)
        ]
        assert gaps[1] / gaps[0] == pytest.approx(0.5, rel=1e-9)


class TestReflect:
    """Tests for the x ↦ −x mirror."""

    def test_involution(self, ebbing_grid: FieldGrid) -> None:
        twice = reflect(reflect(ebbing_grid))
        assert np.array_equal(twice.x_nodes, ebbing_grid.x_nodes)
        assert np.array_equal(twice.u1_poly.coeffs, ebbing_grid.u1_poly.coeffs)
        assert twice.orientation == 1

    def test_mirrors_fields(self, ebbing_grid: FieldGrid) -> None:
        mirrored = reflect(ebbing_grid)
        assert mirrored.frame_speed == pytest.approx(-ebbing_grid.frame_speed)
        assert np.allclose(mirrored.zeta, ebbing_grid.zeta[::-1])
        assert np.allclose(mirrored.u1, -ebbing_grid.u1[:, ::-1])
        assert np.allclose(divergence_field(mirrored), divergence_field(ebbing_grid)[:, ::-1], atol=1e-10)


# ── Streamlines ──────────────────────────────────────────────────────


class TestStreamlines:
    """Tests for streamlines_and_vorticity."""

    def test_traces_inside_the_fluid(self, ebbing_grid: FieldGrid) -> None:
        picture = streamlines_and_vorticity(ebbing_grid, 3)
        assert len(picture.streamlines) == 3
        top = ebbing_grid.eps * float(np.max(ebbing_grid.zeta))
        for line in picture.streamlines:
            assert line.x.size > 1
            assert np.all((line.s >= 0.0) & (line.s <= 1.0))
            assert np.all((line.z >= 0.0) & (line.z <= 1.01 * top))
        assert picture.omega.shape == (ebbing_grid.ny, ebbing_grid.nx)

    def test_bad_seeds_skipped(self, ebbing_grid: FieldGrid, caplog: pytest.LogCaptureFixture) -> None:
        seeds = [(None, 0.5), (100.0, 0.5), (0.0, 1.5)]
        with caplog.at_level(logging.WARNING, logger="boreforge.core.fields"):
            picture = streamlines_and_vorticity(ebbing_grid, seeds)
        assert len(picture.streamlines) == 1
        assert sum("outside the strip" in r.getMessage() for r in caplog.records) == 2
