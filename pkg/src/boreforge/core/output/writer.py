"""Deterministic CSV and JSON writers with metadata sidecars.

Every data file ``<name>`` gets a sidecar ``<name>.meta.json`` holding the
tool name, its version and the resolved run configuration.  Data files carry
no timestamps, floats are written with 17 significant digits and JSON keys
are sorted, so identical configurations give byte-identical outputs.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from boreforge import __version__
from boreforge.utils.errors import OutputError


logger = logging.getLogger(__name__)

TOOL_NAME = "boreforge"
SIDECAR_SUFFIX = ".meta.json"


def format_value(value: Any) -> str:
    """Render one CSV cell."""
    if isinstance(value, bool | np.bool_):
        return "true" if value else "false"
    if isinstance(value, int | np.integer):
        return str(int(value))
    if isinstance(value, float | np.floating):
        return format(float(value), ".17g")
    if value is None:
        return ""
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


def jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays, enums, paths and non-finite floats for JSON."""
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, list | tuple):
        return [jsonable(v) for v in value]
    if isinstance(value, bool | np.bool_):
        return bool(value)
    if isinstance(value, int | np.integer):
        return int(value)
    if isinstance(value, float | np.floating):
        f = float(value)
        return f if math.isfinite(f) else None
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    return value


def sidecar_path(path: Path) -> Path:
    """``<file>.meta.json`` next to ``path``."""
    return path.with_name(path.name + SIDECAR_SUFFIX)


def _dump(payload: Any) -> str:
    return json.dumps(jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_sidecar(path: Path, config: Mapping[str, Any]) -> Path:
    """Write the metadata sidecar of ``path``.

    Raises:
        OutputError: If the file cannot be written.
    """
    target = sidecar_path(path)
    meta = {"tool": TOOL_NAME, "version": __version__, "config": dict(config)}
    try:
        target.write_text(_dump(meta), encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"Cannot write sidecar {target}: {exc}") from exc
    return target


def write_json(path: Path, payload: Any, meta: Mapping[str, Any] | None = None) -> Path:
    """Write ``payload`` as sorted-key JSON (and its sidecar when ``meta`` is given).

    Raises:
        OutputError: If the file cannot be written.
    """
    path = path.expanduser().resolve()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(_dump(payload), encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"Cannot write {path}: {exc}") from exc
    if meta is not None:
        write_sidecar(path, meta)
    logger.info("JSON written path=%s", path)
    return path


class CsvWriter:
    """Streaming CSV writer with a fixed column order.

    The header is written on open, so an empty table is still a valid CSV.
    Supports the context manager protocol; the sidecar is written on close.

    Args:
        output_path: Target file; parent directories are created.
        columns: Column names in output order.
        meta: Resolved configuration for the sidecar, or ``None`` for no sidecar.

    Attributes:
        output_path: The resolved output file path.
        rows_written: Number of data rows written.
    """

    def __init__(
        self,
        output_path: Path,
        columns: Sequence[str],
        meta: Mapping[str, Any] | None = None,
    ) -> None:
        self.output_path: Path = output_path.expanduser().resolve()
        self.columns: tuple[str, ...] = tuple(columns)
        self.rows_written: int = 0
        self._meta = meta
        try:
            self.output_path.parent.mkdir(parents=True, exist_ok=True)
            self._file = open(self.output_path, "w", encoding="utf-8", newline="")  # noqa: SIM115
        except OSError as exc:
            raise OutputError(f"Cannot open {self.output_path}: {exc}") from exc
        self._writer = csv.writer(self._file, lineterminator="\n")
        self._writer.writerow(self.columns)

    def write_row(self, row: Mapping[str, Any]) -> None:
        """Write one row; missing columns are left empty.

        Raises:
            OutputError: If ``row`` has keys outside the declared columns.
        """
        unknown = set(row) - set(self.columns)
        if unknown:
            raise OutputError(f"Unknown CSV columns: {sorted(unknown)}")
        self._writer.writerow([format_value(row.get(c)) for c in self.columns])
        self.rows_written += 1

    def write_rows(self, rows: Iterable[Mapping[str, Any]]) -> None:
        """Write several rows."""
        for row in rows:
            self.write_row(row)

    def close(self) -> None:
        """Close the file and write the sidecar."""
        if self._file and not self._file.closed:
            self._file.close()
            if self._meta is not None:
                write_sidecar(self.output_path, self._meta)
            logger.info("CSV written path=%s rows=%d", self.output_path, self.rows_written)

    def __enter__(self) -> CsvWriter:
        """Enter the context manager."""
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc_val: BaseException | None,
        exc_tb: Any,
    ) -> None:
        """Exit the context manager, closing the file."""
        self.close()


def write_csv(
    path: Path,
    columns: Sequence[str],
    rows: Iterable[Mapping[str, Any]],
    meta: Mapping[str, Any] | None = None,
) -> Path:
    """Write a whole table at once."""
    with CsvWriter(path, columns, meta) as writer:
        writer.write_rows(rows)
    return writer.output_path


def read_csv(path: Path) -> list[dict[str, str]]:
    """Read a CSV written by :class:`CsvWriter` back into string rows."""
    with open(path, encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))
