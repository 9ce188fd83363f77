"""Perturbed bore families on the reference orbits."""

from __future__ import annotations

import json
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from boreforge.cli import main
from boreforge.core.orbit import OrbitSolution
from boreforge.core.perturbation import bore
from boreforge.core.perturbation.bore import (
    CONTRACTION_CERTIFICATE,
    GLUE_TOL,
    ORBIT_COLUMNS,
    lipschitz_ratio,
    perturbed_bore,
)
from boreforge.core.perturbation.hyperbolic import Branch
from boreforge.core.perturbation.registry import ConstantShift, GaussianBump, ZeroPerturbation
from boreforge.utils.errors import GluingError, ParameterError


pytestmark = pytest.mark.slow


# ── Lipschitz helper ─────────────────────────────────────────────────


class TestLipschitzRatio:
    """Tests for lipschitz_ratio (fast)."""

    def test_pairs(self) -> None:
        corrections = [np.zeros((3, 2)), np.full((3, 2), 2.0), np.full((3, 2), 3.0)]
        assert lipschitz_ratio([0.0, 1.0, 2.0], corrections) == pytest.approx(2.0)

    def test_single_member(self) -> None:
        assert lipschitz_ratio([0.5], [np.zeros((2, 2))]) is None


# ── Families on the reference orbits ─────────────────────────────────


class TestPerturbedBore:
    """Tests for perturbed_bore."""

    def test_zero_family_is_idempotent(self, ebbing_orbit: OrbitSolution) -> None:
        study = perturbed_bore(ebbing_orbit, ZeroPerturbation(), [0.0, 1e-4])
        for member in study.members:
            assert member.sup_correction <= 1e-8
        assert study.reference_gap <= 1e-6

    @pytest.mark.parametrize("which", ["ebbing_orbit", "surging_orbit"])
    def test_null_parameter_has_no_correction(self, which: str, request: pytest.FixtureRequest) -> None:
        orbit: OrbitSolution = request.getfixturevalue(which)
        study = perturbed_bore(orbit, GaussianBump(), [0.0, 1e-4])
        null, other = study.members
        assert null.sup_correction <= 1e-10
        assert other.sup_correction > 0.0
        assert study.lipschitz_ratio is not None
        assert np.isfinite(study.lipschitz_ratio)
        for member in study.members:
            assert member.contraction_ratio < CONTRACTION_CERTIFICATE
            assert member.gluing_mismatch <= 1e-6

    def test_lipschitz_ratio_stable_under_halving(self, ebbing_orbit: OrbitSolution) -> None:
        delta = 1e-4
        coarse = perturbed_bore(ebbing_orbit, GaussianBump(), [0.0, delta])
        fine = perturbed_bore(ebbing_orbit, GaussianBump(), [0.0, delta / 2.0])
        assert fine.lipschitz_ratio == pytest.approx(coarse.lipschitz_ratio, rel=0.2)

    def test_constant_shift_moves_the_end_state(self, ebbing_orbit: OrbitSolution) -> None:
        lam, c = 1e-5, 1.0
        study = perturbed_bore(ebbing_orbit, ConstantShift(c=c), [lam])
        # F′(ρ₊) = −1/3 for the reference ebbing set.
        assert study.members[0].endpoint_shift == pytest.approx(3.0 * lam * c, rel=0.25)

    def test_threads_match_serial(self, ebbing_orbit: OrbitSolution) -> None:
        lams = [0.0, 5e-5, 1e-4]
        serial = perturbed_bore(ebbing_orbit, GaussianBump(), lams)
        pooled = perturbed_bore(ebbing_orbit, GaussianBump(), lams, workers=3)
        for a, b in zip(serial.members, pooled.members, strict=True):
            assert np.array_equal(a.correction, b.correction)

    def test_rows_and_summary(self, ebbing_orbit: OrbitSolution) -> None:
        study = perturbed_bore(ebbing_orbit, GaussianBump(width=2.0), [1e-4])
        rows = study.members[0].rows()
        assert len(rows) == len(ebbing_orbit.t)
        assert tuple(rows[0]) == ORBIT_COLUMNS
        summary = study.summary()
        assert summary["perturbation"] == {"family": "gaussian_bump", "t0": 0.0, "width": 2.0}
        assert len(summary["members"]) == 1

    def test_empty_lambdas(self, ebbing_orbit: OrbitSolution) -> None:
        with pytest.raises(ParameterError, match="At least one lambda"):
            perturbed_bore(ebbing_orbit, GaussianBump(), [])


class TestGluingCheck:
    """The seam check compares the attractor branch with a free integration."""

    def test_mismatch_is_measured(self, ebbing_orbit: OrbitSolution) -> None:
        study = perturbed_bore(ebbing_orbit, GaussianBump(), [1e-4])
        mismatch = study.members[0].gluing_mismatch
        assert np.isfinite(mismatch)
        assert mismatch <= GLUE_TOL

    def test_drifting_branch_is_rejected(
        self, ebbing_orbit: OrbitSolution, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        solve = bore.attractor_fixed_point

        def drifting(*args: object, **kwargs: object) -> Branch:
            branch = solve(*args, **kwargs)
            # zero at the switch time, so the branch still starts on the left limit
            ramp = 1e-2 * (branch.s - branch.s[0])
            return replace(branch, x=branch.x + ramp)

        monkeypatch.setattr(bore, "attractor_fixed_point", drifting)
        with pytest.raises(GluingError, match="drifts") as info:
            perturbed_bore(ebbing_orbit, GaussianBump(), [1e-4])
        assert info.value.mismatch > GLUE_TOL


# ── CLI ──────────────────────────────────────────────────────────────


class TestPerturbCommand:
    """Tests for ``boreforge perturb``."""

    def test_writes_members(self, tmp_path: Path) -> None:
        args = ["perturb", "--mu", "2", "--a", "1", "--g", "0.125", "--A", "0.75"]
        args += ["--family", "constant", "--lambdas", "0", "1e-5", "--output-dir", str(tmp_path)]
        assert main(args) == 0
        assert (tmp_path / "perturbed_000.csv").exists()
        assert (tmp_path / "perturbed_001.csv").exists()
        summary = json.loads((tmp_path / "perturbation.json").read_text(encoding="utf-8"))
        assert summary["perturbation"]["family"] == "constant"
        assert summary["members"][0]["sup_correction"] == 0.0


class TestEpsSweepCommand:
    """Tests for ``boreforge sweep --kind eps``."""

    def test_writes_orders(self, tmp_path: Path) -> None:
        args = ["sweep", "--kind", "eps", "--mu", "2", "--a", "1", "--g", "0.125", "--A", "0.75"]
        args += ["--nx", "129", "--ny", "9", "--x-min", "-6", "--x-max", "6", "--output-dir", str(tmp_path)]
        assert main(args) == 0
        text = (tmp_path / "eps_sweep.csv").read_text(encoding="utf-8").splitlines()
        assert text[0].startswith("eps,momentum1_L2")
        assert len(text) == 4
        assert "overall_order" in json.loads((tmp_path / "eps_sweep.json").read_text(encoding="utf-8"))
