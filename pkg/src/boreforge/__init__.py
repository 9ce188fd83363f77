"""Boreforge: a numerical laboratory for shallow viscous bore waves."""

from __future__ import annotations


__version__ = "0.1.0"
