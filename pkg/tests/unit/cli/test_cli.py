"""Tests for the ``boreforge`` command line and its pipelines."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from boreforge.cli import build_parser, main
from boreforge.core.output.writer import read_csv, sidecar_path
from boreforge.core.sweep import REGION_COLUMNS
from boreforge.utils.errors import ParameterError, SlowConvergenceError


EBBING_FLAGS = ["--mu", "2", "--a", "1", "--g", "0.125", "--A", "0.75"]


# ── Parser ───────────────────────────────────────────────────────────


class TestParser:
    """Tests for build_parser."""

    def test_subcommands_registered(self) -> None:
        parser = build_parser()
        for command in ("classify", "orbit", "profile", "fields", "residual", "sweep", "perturb"):
            args = parser.parse_args([command])
            assert args.command == command
            assert callable(args.func)

    def test_no_command_prints_help(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main([]) == 0
        assert "usage: boreforge" in capsys.readouterr().out

    def test_case_sensitive_flags(self) -> None:
        args = build_parser().parse_args(["classify", "--a", "1", "--A", "0.5"])
        assert args.a == 1.0
        assert args.A == 0.5

    def test_unknown_family_rejected(self) -> None:
        with pytest.raises(SystemExit):
            build_parser().parse_args(["perturb", "--family", "sawtooth"])


# ── classify ─────────────────────────────────────────────────────────


class TestClassify:
    """Tests for ``boreforge classify``."""

    @pytest.mark.parametrize(
        ("g", "A", "label"),
        [("0.125", "0.75", "C1"), ("30", "0.9", "Cminus1"), ("25", "0.855", "Cminus1")],
    )
    def test_regions(self, g: str, A: str, label: str, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["classify", "--g", g, "--A", A]) == 0
        assert capsys.readouterr().out == f"{label}\n"

    def test_excluded_exits_two(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["classify", "--g", "8", "--A", "0.5"]) == 2
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "Excluded"
        assert lines[1].startswith("g_lower=")
        assert " g_upper=" in lines[1]

    def test_missing_A(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["classify", "--g", "1"]) == 2
        assert "Error: A is required" in capsys.readouterr().err

    def test_reads_config(self, fixtures_dir: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["classify", "--config", str(fixtures_dir / "config_ebbing.yaml")]) == 0
        assert capsys.readouterr().out == "C1\n"

    def test_flag_overrides_config(self, fixtures_dir: Path, capsys: pytest.CaptureFixture[str]) -> None:
        config = str(fixtures_dir / "config_ebbing.yaml")
        assert main(["classify", "--config", config, "--g", "30", "--A", "0.9"]) == 0
        assert capsys.readouterr().out == "Cminus1\n"

    @pytest.mark.parametrize(
        "name",
        ["config_unknown_key.yaml", "config_invalid_syntax.yaml", "config_not_mapping.yaml", "missing.yaml"],
    )
    def test_bad_config(self, name: str, fixtures_dir: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["classify", "--config", str(fixtures_dir / name)]) == 2
        assert capsys.readouterr().err.startswith("Error: ")


# ── orbit / profile / fields / residual ──────────────────────────────


class TestOrbitPipelines:
    """Tests for the single-bore pipelines."""

    def test_orbit_writes_products(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["orbit", *EBBING_FLAGS, "--output-dir", str(tmp_path)]) == 0
        rows = read_csv(tmp_path / "orbit.csv")
        assert list(rows[0]) == ["t", "rho", "rho_prime"]
        assert len(rows) > 100
        meta = json.loads(sidecar_path(tmp_path / "orbit.csv").read_text(encoding="utf-8"))
        assert meta["config"]["params"]["A"] == 0.75
        summary = json.loads((tmp_path / "orbit.json").read_text(encoding="utf-8"))
        assert summary["profile_shape"] == "oscillatory"
        assert summary["turns"] >= 2
        assert "Orbit written to" in capsys.readouterr().out

    def test_orbit_is_deterministic(self, tmp_path: Path) -> None:
        for name in ("one", "two"):
            assert main(["orbit", *EBBING_FLAGS, "--output-dir", str(tmp_path / name)]) == 0
        assert (tmp_path / "one" / "orbit.csv").read_bytes() == (tmp_path / "two" / "orbit.csv").read_bytes()

    def test_orbit_excluded(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        code = main(["orbit", "--mu", "2", "--a", "1", "--g", "8", "--A", "0.5", "--output-dir", str(tmp_path)])
        assert code == 2
        captured = capsys.readouterr()
        assert captured.out.startswith("Excluded\ng_lower=")
        assert not (tmp_path / "orbit.csv").exists()

    def test_invalid_parameter(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        code = main(["orbit", "--mu", "-1", "--a", "1", "--g", "0.125", "--A", "0.75", "--output-dir", str(tmp_path)])
        assert code == 2
        assert "Error:" in capsys.readouterr().err

    def test_internal_error_exits_one(
        self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
    ) -> None:
        def fail(*args: object, **kwargs: object) -> None:
            raise SlowConvergenceError("Terminal ball not reached", final_state=(0.0, 0.0), final_time=1.0)

        monkeypatch.setattr("boreforge.core.runner.shoot_heteroclinic", fail)
        assert main(["orbit", *EBBING_FLAGS, "--output-dir", str(tmp_path)]) == 1
        assert "SlowConvergenceError" in capsys.readouterr().err

    @pytest.mark.parametrize("exc", [ValueError("bad array shape"), RuntimeError("solver crashed")])
    def test_unexpected_error_exits_one(
        self,
        exc: Exception,
        tmp_path: Path,
        monkeypatch: pytest.MonkeyPatch,
        capsys: pytest.CaptureFixture[str],
    ) -> None:
        def fail(*args: object, **kwargs: object) -> None:
            raise exc

        monkeypatch.setattr("boreforge.core.runner.shoot_heteroclinic", fail)
        assert main(["orbit", *EBBING_FLAGS, "--output-dir", str(tmp_path)]) == 1
        assert f"Error: {type(exc).__name__}: {exc}" in capsys.readouterr().err

    def test_domain_error_from_pipeline_exits_two(
        self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
    ) -> None:
        def fail(*args: object, **kwargs: object) -> None:
            raise ParameterError("mu must be positive")

        monkeypatch.setattr("boreforge.core.runner.shoot_heteroclinic", fail)
        assert main(["orbit", *EBBING_FLAGS, "--output-dir", str(tmp_path)]) == 2
        assert "Error: mu must be positive" in capsys.readouterr().err

    def test_profile(self, tmp_path: Path) -> None:
        assert main(["profile", *EBBING_FLAGS, "--output-dir", str(tmp_path)]) == 0
        rows = read_csv(tmp_path / "profile.csv")
        assert list(rows[0]) == ["x", "H", "U", "U1", "U2", "P", "P1", "P2"]
        checks = json.loads((tmp_path / "profile_checks.json").read_text(encoding="utf-8"))
        assert checks["lienard"]["passed"] is True
        assert checks["bounds"]["holds"] is True

    def test_fields_with_svg(self, tmp_path: Path) -> None:
        args = ["fields", *EBBING_FLAGS, "--nx", "33", "--ny", "5", "--x-min", "-5", "--x-max", "5"]
        assert main([*args, "--svg", "--output-dir", str(tmp_path)]) == 0
        data = json.loads((tmp_path / "fields.json").read_text(encoding="utf-8"))
        assert len(data["x_nodes"]) == 33
        assert len(data["u1"]) == 5
        assert (tmp_path / "fields.svg").exists()

    def test_fields_lab_frame(self, tmp_path: Path) -> None:
        args = ["fields", *EBBING_FLAGS, "--nx", "9", "--ny", "3", "--x-min", "-1", "--x-max", "1", "--frame", "lab"]
        assert main([*args, "--output-dir", str(tmp_path)]) == 0
        assert json.loads((tmp_path / "fields.json").read_text(encoding="utf-8"))["frame"] == "lab"

    def test_residual(self, tmp_path: Path) -> None:
        args = ["residual", *EBBING_FLAGS, "--nx", "65", "--ny", "5", "--x-min", "-5", "--x-max", "5"]
        assert main([*args, "--output-dir", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "residual.json").read_text(encoding="utf-8"))
        assert report["eps"] == 0.1
        assert "flux_equivalence_gap" in report

    def test_bad_grid_flag(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["fields", *EBBING_FLAGS, "--nx", "3", "--output-dir", str(tmp_path)]) == 2
        assert "grid.nx" in capsys.readouterr().err


# ── sweep ────────────────────────────────────────────────────────────


class TestSweep:
    """Tests for ``boreforge sweep``."""

    def test_region_sweep_from_config(self, tmp_path: Path, fixtures_dir: Path) -> None:
        config = str(fixtures_dir / "config_sweep_region.yaml")
        assert main(["sweep", "--config", config, "--svg", "--output-dir", str(tmp_path)]) == 0
        rows = read_csv(tmp_path / "region_sweep.csv")
        assert len(rows) == 20
        assert tuple(rows[0]) == REGION_COLUMNS
        assert {r["region"] for r in rows} <= {"C1", "Cminus1", "Excluded"}
        assert all(r["status"] == "ok" for r in rows)
        assert (tmp_path / "regions.svg").exists()

    def test_empty_sweep_writes_header(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["sweep", "--kind", "region", "--g-count", "0", "--output-dir", str(tmp_path)]) == 0
        text = (tmp_path / "region_sweep.csv").read_text(encoding="utf-8")
        assert text == ",".join(REGION_COLUMNS) + "\n"
        assert "(0 points, 0 failed)" in capsys.readouterr().out

    def test_threads_do_not_change_output(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        base = ["sweep", "--g-count", "7", "--A-count", "5"]
        assert main([*base, "--threads", "1", "--output-dir", str(tmp_path / "serial")]) == 0
        monkeypatch.setenv("BOREFORGE_THREADS", "3")
        assert main([*base, "--threads", "4", "--output-dir", str(tmp_path / "pooled")]) == 0
        serial = (tmp_path / "serial" / "region_sweep.csv").read_bytes()
        pooled = (tmp_path / "pooled" / "region_sweep.csv").read_bytes()
        assert serial == pooled

    def test_orbit_sweep_records_excluded(self, tmp_path: Path) -> None:
        args = ["sweep", "--kind", "orbit", "--mu", "2", "--a", "1"]
        args += ["--g-min", "8", "--g-max", "8", "--g-count", "1", "--A-min", "0.5", "--A-max", "0.5", "--A-count", "1"]
        assert main([*args, "--output-dir", str(tmp_path)]) == 0
        (row,) = read_csv(tmp_path / "orbit_sweep.csv")
        assert row["iota"] == "0"
        assert row["status"] == "ok"
        assert row["decay_rate"] == ""
