"""Configuration file loading and flag merging.

Loads YAML or JSON configuration documents (JSON is a YAML subset),
validates them against :class:`~boreforge.core.schemas.ConfigFile` and merges
command-line overrides on top to produce a :class:`RunConfig`.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from boreforge.core.schemas import Command, ConfigFile, RunConfig
from boreforge.utils.errors import ConfigFileError, ConfigValidationError


logger = logging.getLogger(__name__)

PARAM_KEYS: tuple[str, ...] = ("mu", "a", "g", "A", "sigma", "eps", "dimensional")
BLOCK_KEYS: tuple[str, ...] = ("grid", "orbit", "sweep", "perturbation", "plot")


def _describe(err: ValidationError) -> str:
    parts = []
    for item in err.errors():
        where = ".".join(str(p) for p in item["loc"]) or "<root>"
        parts.append(f"{where}: {item['msg']}")
    return "; ".join(parts)


class ConfigParser:
    """Parser for boreforge configuration files.

    Loads a YAML (or JSON) document, checks that the top level is a mapping
    and validates it against the configuration schema.  Unknown keys are
    rejected.
    """

    def parse_file(self, path: Path | str) -> ConfigFile:
        """Parse a configuration file from disk.

        Args:
            path: Path to a ``.yaml``, ``.yml`` or ``.json`` file.

        Returns:
            The validated document.

        Raises:
            ConfigFileError: If the file cannot be read or is not valid YAML.
            ConfigValidationError: If the schema is violated.
        """
        file_path = Path(path)
        try:
            raw_text = file_path.read_text(encoding="utf-8")
        except FileNotFoundError as err:
            raise ConfigFileError(f"Config file not found: {file_path}") from err
        except OSError as err:
            raise ConfigFileError(f"Cannot read config file: {file_path}") from err

        try:
            data = yaml.safe_load(raw_text)
        except yaml.YAMLError as err:
            raise ConfigFileError(f"Invalid YAML syntax in {file_path}: {err}") from err

        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigValidationError("Config file must contain a mapping at the top level")

        logger.debug("Config file loaded path=%s keys=%s", file_path, sorted(data))
        return self.parse_dict(data)

    def parse_dict(self, data: Mapping[str, Any]) -> ConfigFile:
        """Validate an already-loaded document.

        Raises:
            ConfigValidationError: If the schema is violated.
        """
        try:
            return ConfigFile.model_validate(dict(data))
        except ValidationError as err:
            raise ConfigValidationError(f"Invalid configuration: {_describe(err)}") from err


def merge_config(
    command: Command | str,
    file_config: ConfigFile | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> RunConfig:
    """Resolve a run configuration; flag overrides win over file values.

    Args:
        command: The command to run (the CLI subcommand wins over the file).
        file_config: Parsed configuration file, if any.
        overrides: Flat parameter keys, ``output_dir`` and ``<block>.<key>``
            entries; ``None`` values are ignored.

    Raises:
        ConfigValidationError: If the merged configuration is invalid.
    """
    base = file_config.model_dump(exclude_none=True) if file_config is not None else {}
    params = {k: base[k] for k in PARAM_KEYS if k in base}
    blocks: dict[str, dict[str, Any]] = {k: dict(base.get(k, {})) for k in BLOCK_KEYS}
    output_dir = base.get("output_dir")

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key in PARAM_KEYS:
            params[key] = value
        elif key == "output_dir":
            output_dir = value
        elif "." in key and key.split(".", 1)[0] in BLOCK_KEYS:
            block, name = key.split(".", 1)
            blocks[block][name] = value
        else:
            raise ConfigValidationError(f"Unknown override key: {key}")

    document: dict[str, Any] = {"command": str(command), "params": params}
    if output_dir is not None:
        document["output_dir"] = output_dir
    document.update({k: v for k, v in blocks.items() if v})
    try:
        config = RunConfig.model_validate(document)
    except ValidationError as err:
        raise ConfigValidationError(f"Invalid configuration: {_describe(err)}") from err
    logger.debug("Run configuration resolved command=%s", config.command)
    return config
