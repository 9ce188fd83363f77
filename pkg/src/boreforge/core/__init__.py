"""Boreforge core: parameters, Liénard landscape, orbits, fields, residuals."""

from __future__ import annotations
