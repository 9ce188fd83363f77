"""Data and figure writers."""

from __future__ import annotations

from boreforge.core.output.writer import (
    CsvWriter,
    read_csv,
    sidecar_path,
    write_csv,
    write_json,
    write_sidecar,
)


__all__ = [
    "CsvWriter",
    "read_csv",
    "sidecar_path",
    "write_csv",
    "write_json",
    "write_sidecar",
]
