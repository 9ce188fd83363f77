"""Tests for configuration loading, schemas and flag merging."""

from __future__ import annotations

from pathlib import Path

import pytest

from boreforge.core.config import ConfigParser, merge_config
from boreforge.core.fields import Frame
from boreforge.core.schemas import Command, ConfigFile, ParamsModel, RunConfig, SweepKind
from boreforge.core.sweep import SweepErrorPolicy
from boreforge.utils.errors import ConfigFileError, ConfigValidationError, ParameterError


# ── Helpers ──────────────────────────────────────────────────────────


@pytest.fixture()
def parser() -> ConfigParser:
    return ConfigParser()


# ── ConfigParser ─────────────────────────────────────────────────────


class TestConfigParser:
    """Tests for ConfigParser."""

    def test_parse_yaml(self, parser: ConfigParser, fixtures_dir: Path) -> None:
        doc = parser.parse_file(fixtures_dir / "config_ebbing.yaml")
        assert doc.mu == 2.0
        assert doc.A == 0.75
        assert doc.grid is not None
        assert doc.grid.nx == 65

    def test_parse_json(self, parser: ConfigParser, fixtures_dir: Path) -> None:
        doc = parser.parse_file(fixtures_dir / "config_dimensional.json")
        assert doc.dimensional is not None
        assert doc.dimensional.mu == 0.5

    def test_empty_file(self, parser: ConfigParser, tmp_path: Path) -> None:
        path = tmp_path / "empty.yaml"
        path.write_text("", encoding="utf-8")
        assert parser.parse_file(path) == ConfigFile()

    def test_missing_file(self, parser: ConfigParser, tmp_path: Path) -> None:
        with pytest.raises(ConfigFileError, match="not found"):
            parser.parse_file(tmp_path / "nope.yaml")

    def test_invalid_syntax(self, parser: ConfigParser, fixtures_dir: Path) -> None:
        with pytest.raises(ConfigFileError, match="Invalid YAML syntax"):
            parser.parse_file(fixtures_dir / "config_invalid_syntax.yaml")

    def test_not_a_mapping(self, parser: ConfigParser, fixtures_dir: Path) -> None:
        with pytest.raises(ConfigValidationError, match="mapping at the top level"):
            parser.parse_file(fixtures_dir / "config_not_mapping.yaml")

    def test_unknown_key_rejected(self, parser: ConfigParser, fixtures_dir: Path) -> None:
        with pytest.raises(ConfigValidationError, match="viscosity"):
            parser.parse_file(fixtures_dir / "config_unknown_key.yaml")

    def test_bad_grid_rejected(self, parser: ConfigParser, fixtures_dir: Path) -> None:
        with pytest.raises(ConfigValidationError, match=r"grid\.nx"):
            parser.parse_file(fixtures_dir / "config_bad_grid.yaml")

    def test_unknown_block_key(self, parser: ConfigParser) -> None:
        with pytest.raises(ConfigValidationError, match="sweep"):
            parser.parse_dict({"sweep": {"steps": 3}})


# ── Schemas ──────────────────────────────────────────────────────────


class TestParamsModel:
    """Tests for ParamsModel."""

    def test_flat_to_params(self) -> None:
        params = ParamsModel(mu=2.0, a=1.0, g=0.125, A=0.75).to_params()
        assert (params.mu, params.a, params.g, params.A, params.eps) == (2.0, 1.0, 0.125, 0.75, 0.1)

    def test_dimensional_to_params(self, parser: ConfigParser, fixtures_dir: Path) -> None:
        config = merge_config(Command.ORBIT, parser.parse_file(fixtures_dir / "config_dimensional.json"))
        params = config.params.to_params()
        assert params.mu == pytest.approx(2.0)
        assert params.a == pytest.approx(4.0)
        assert params.g == pytest.approx(0.125)

    def test_both_sources_rejected(self) -> None:
        with pytest.raises(ValueError, match="not both"):
            ParamsModel.model_validate(
                {
                    "mu": 1.0,
                    "A": 0.5,
                    "dimensional": {"mu": 1.0, "kappa": 1.0, "a": 1.0, "g": 1.0, "gamma": 1.0},
                }
            )

    def test_missing_keys(self) -> None:
        with pytest.raises(ParameterError, match="missing parameter"):
            ParamsModel(mu=2.0, A=0.5).to_params()
        with pytest.raises(ParameterError, match="A is required"):
            ParamsModel(g=1.0).region_point()

    def test_region_point_needs_only_g(self) -> None:
        assert ParamsModel(g=8.0, A=0.3).region_point() == (8.0, 0.3)

    def test_out_of_range_value(self) -> None:
        with pytest.raises(ParameterError):
            ParamsModel(mu=2.0, a=1.0, g=0.125, A=1.5).to_params()


class TestRunConfig:
    """Tests for the resolved run configuration."""

    def test_defaults(self) -> None:
        config = RunConfig(command=Command.SWEEP)
        assert config.sweep.kind is SweepKind.REGION
        assert config.sweep.on_error is SweepErrorPolicy.SKIP_POINT
        assert config.grid.frame is Frame.TRAVELING
        assert config.output_dir == Path("out")

    def test_sidecar_round_trip(self, parser: ConfigParser, fixtures_dir: Path) -> None:
        config = merge_config(Command.FIELDS, parser.parse_file(fixtures_dir / "config_ebbing.yaml"))
        restored = RunConfig.model_validate(config.model_dump(mode="json"))
        assert restored == config

    def test_grid_range_pairs(self) -> None:
        with pytest.raises(ValueError, match="together"):
            RunConfig.model_validate({"command": "fields", "grid": {"x_min": -1.0}})

    def test_grid_spec(self) -> None:
        config = RunConfig.model_validate(
            {"command": "fields", "grid": {"x_min": -2.0, "x_max": 2.0, "frame": "lab"}}
        )
        spec = config.grid.to_spec()
        assert spec.x_range == (-2.0, 2.0)
        assert spec.frame is Frame.LAB

    def test_unknown_perturbation_family(self) -> None:
        with pytest.raises(ValueError, match="unknown perturbation family"):
            RunConfig.model_validate({"command": "perturb", "perturbation": {"family": "sawtooth"}})

    def test_family_kwargs(self) -> None:
        config = RunConfig.model_validate(
            {"command": "perturb", "perturbation": {"family": "constant", "c": 2.0}}
        )
        assert config.perturbation.family_kwargs() == {"c": 2.0}


# ── merge_config ─────────────────────────────────────────────────────


class TestMergeConfig:
    """Tests for merge_config."""

    def test_flags_win_over_file(self, parser: ConfigParser, fixtures_dir: Path) -> None:
        doc = parser.parse_file(fixtures_dir / "config_ebbing.yaml")
        config = merge_config(Command.FIELDS, doc, {"g": 0.25, "grid.nx": 33, "output_dir": Path("elsewhere")})
        assert config.params.g == 0.25
        assert config.params.mu == 2.0
        assert config.grid.nx == 33
        assert config.grid.ny == 9
        assert config.output_dir == Path("elsewhere")

    def test_none_overrides_ignored(self, parser: ConfigParser, fixtures_dir: Path) -> None:
        doc = parser.parse_file(fixtures_dir / "config_ebbing.yaml")
        config = merge_config(Command.ORBIT, doc, {"g": None, "grid.nx": None})
        assert config.params.g == 0.125
        assert config.grid.nx == 65

    def test_subcommand_wins(self, parser: ConfigParser, fixtures_dir: Path) -> None:
        doc = parser.parse_file(fixtures_dir / "config_sweep_region.yaml")
        assert merge_config("classify", doc).command is Command.CLASSIFY

    def test_without_file(self) -> None:
        config = merge_config(Command.CLASSIFY, None, {"g": 1.0, "A": 0.5})
        assert config.params.region_point() == (1.0, 0.5)

    def test_unknown_override(self) -> None:
        with pytest.raises(ConfigValidationError, match="Unknown override key"):
            merge_config(Command.ORBIT, None, {"viscosity": 1.0})

    def test_invalid_override_value(self) -> None:
        with pytest.raises(ConfigValidationError, match="Invalid configuration"):
            merge_config(Command.SWEEP, None, {"sweep.g_count": -1})
