"""Parameter sweeps over (g, A) grids and ε lists.

The :class:`SweepEngine` dispatches independent points to a thread pool and
collects one row per point in input order.  A failing point becomes a row
with ``status="failed"`` and the exception class in ``error`` unless the
engine runs with :attr:`SweepErrorPolicy.ABORT_SWEEP`.
"""

from __future__ import annotations

import logging
import math
import os
from collections.abc import Callable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from boreforge.core.fields import GridSpec, reconstruct
from boreforge.core.landscape import Chirality, Landscape, classify
from boreforge.core.orbit import ShootOpts, energy_audit, shoot_heteroclinic
from boreforge.core.params import PhysParams
from boreforge.core.profile import ShallowProfile, build_profile
from boreforge.core.residual import SWEEP_COLUMNS, evaluate_residuals, fitted_order
from boreforge.utils.errors import SweepPointError


logger = logging.getLogger(__name__)

THREADS_ENV = "BOREFORGE_THREADS"
STATUS_OK = "ok"
STATUS_FAILED = "failed"

REGION_COLUMNS: tuple[str, ...] = ("g", "A", "region", "iota", "g_lower", "g_upper", "status", "error")
ORBIT_SWEEP_COLUMNS: tuple[str, ...] = (
    "g",
    "A",
    "iota",
    "decay_rate",
    "decay_r2",
    "trap_violation",
    "energy_defect",
    "samples",
    "status",
    "error",
)
EPS_COLUMNS: tuple[str, ...] = (*SWEEP_COLUMNS, "converged", "status", "error")


class SweepErrorPolicy(Enum):
    """Controls behaviour when a sweep point fails."""

    SKIP_POINT = "skip_point"
    """Record a failed row and continue with the next point."""

    ABORT_SWEEP = "abort_sweep"
    """Raise immediately and halt the sweep."""


@dataclass(frozen=True)
class SweepPoint:
    """One point of a sweep.

    Attributes:
        index: Position in the sweep.
        values: Coordinates of the point (e.g. ``{"g": 0.1, "A": 0.5}``).
    """

    index: int
    values: Mapping[str, float]


@dataclass
class SweepResult:
    """Rows of a finished sweep in input order."""

    columns: tuple[str, ...]
    rows: list[dict[str, Any]] = field(default_factory=list)

    @property
    def failed(self) -> int:
        """Number of failed rows."""
        return sum(1 for r in self.rows if r.get("status") == STATUS_FAILED)


def resolve_threads(env: Mapping[str, str] | None = None, requested: int | None = None) -> int:
    """Worker count: ``requested`` or a default, capped by ``BOREFORGE_THREADS``."""
    env = os.environ if env is None else env
    workers = requested if requested is not None else min(8, os.cpu_count() or 1)
    raw = env.get(THREADS_ENV)
    if raw is not None:
        try:
            cap = int(raw)
        except ValueError:
            cap = 0
        if cap < 1:
            logger.warning("Ignoring invalid %s=%r", THREADS_ENV, raw)
        else:
            workers = min(workers, cap)
    return max(1, workers)


class SweepEngine:
    """Evaluates sweep points concurrently.

    Args:
        evaluate: Maps a point to its row (status and error are filled in).
        columns: Output columns.
        error_policy: How to handle per-point failures.
        max_workers: Pool size (see :func:`resolve_threads`).

    Attributes:
        points_processed: Total points evaluated.
        points_failed: Points that raised.
    """

    def __init__(
        self,
        evaluate: Callable[[SweepPoint], dict[str, Any]],
        columns: Sequence[str],
        error_policy: SweepErrorPolicy = SweepErrorPolicy.SKIP_POINT,
        max_workers: int = 1,
    ) -> None:
        self.evaluate = evaluate
        self.columns: tuple[str, ...] = tuple(columns)
        self.error_policy = error_policy
        self.max_workers = max(1, max_workers)
        self.points_processed: int = 0
        self.points_failed: int = 0

    def reset_counters(self) -> None:
        """Reset all processing counters to zero."""
        self.points_processed = 0
        self.points_failed = 0

    def _run_point(self, point: SweepPoint) -> dict[str, Any]:
        try:
            row = self.evaluate(point)
        except Exception as exc:
            if self.error_policy is SweepErrorPolicy.ABORT_SWEEP:
                raise SweepPointError(
                    f"Sweep point failed at index={point.index} values={dict(point.values)}"
                ) from exc
            logger.warning(
                "Sweep point failed index=%d error=%s",
                point.index,
                type(exc).__name__,
            )
            row = {**point.values, "status": STATUS_FAILED, "error": type(exc).__name__}
        else:
            row = {**row, "status": STATUS_OK, "error": ""}
        return {k: row.get(k) for k in self.columns}

    def run(self, points: Sequence[SweepPoint]) -> SweepResult:
        """Evaluate every point; rows keep the order of ``points``."""
        if self.max_workers == 1 or len(points) < 2:
            rows = [self._run_point(p) for p in points]
        else:
            with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
                rows = list(pool.map(self._run_point, points))
        self.points_processed += len(rows)
        self.points_failed += sum(1 for r in rows if r.get("status") == STATUS_FAILED)
        logger.info(
            "Sweep finished points=%d failed=%d workers=%d",
            len(rows),
            self.points_failed,
            self.max_workers,
        )
        return SweepResult(columns=self.columns, rows=rows)


# -- Point sets ----------------------------------------------------------------------


def grid_points(
    g_range: tuple[float, float],
    g_count: int,
    A_range: tuple[float, float],
    A_count: int,
) -> list[SweepPoint]:
    """Row-major (g, A) grid; empty when either count is zero."""
    gs = np.linspace(g_range[0], g_range[1], g_count) if g_count > 0 else np.array([])
    As = np.linspace(A_range[0], A_range[1], A_count) if A_count > 0 else np.array([])
    return [
        SweepPoint(index=i, values={"g": float(g), "A": float(A)})
        for i, (g, A) in enumerate((g, A) for g in gs for A in As)
    ]


def eps_points(eps_values: Sequence[float]) -> list[SweepPoint]:
    """One point per ε."""
    return [SweepPoint(index=i, values={"eps": float(e)}) for i, e in enumerate(eps_values)]


# -- Point evaluators ------------------------------------------------------------------


def region_row(point: SweepPoint) -> dict[str, Any]:
    """Classification of one (g, A) point."""
    c = classify(point.values["g"], point.values["A"])
    return {
        "g": c.g,
        "A": c.A,
        "region": c.region.label,
        "iota": c.chirality.iota,
        "g_lower": c.g_lower,
        "g_upper": c.g_upper,
    }


def orbit_row_factory(
    base: PhysParams, opts: ShootOpts | None = None
) -> Callable[[SweepPoint], dict[str, Any]]:
    """Evaluator shooting the heteroclinic orbit at each (g, A) with μ, a, ε from ``base``."""

    def evaluate(point: SweepPoint) -> dict[str, Any]:
        params = PhysParams(
            mu=base.mu,
            a=base.a,
            g=point.values["g"],
            A=point.values["A"],
            sigma=base.sigma,
            eps=base.eps,
        )
        landscape = Landscape.build(params)
        if landscape.chirality is Chirality.EXCLUDED:
            return {"g": params.g, "A": params.A, "iota": 0}
        orbit = shoot_heteroclinic(params, landscape, opts)
        audit = energy_audit(orbit, landscape)
        return {
            "g": params.g,
            "A": params.A,
            "iota": orbit.chirality.iota,
            "decay_rate": orbit.decay_rate,
            "decay_r2": orbit.decay_r2,
            "trap_violation": orbit.trap_violation,
            "energy_defect": audit.defect,
            "samples": len(orbit.t),
        }

    return evaluate


def eps_row_factory(
    profile: ShallowProfile, spec: GridSpec
) -> Callable[[SweepPoint], dict[str, Any]]:
    """Evaluator of the leading-order residual at each ε."""

    def evaluate(point: SweepPoint) -> dict[str, Any]:
        params = profile.params.with_eps(point.values["eps"])
        report = evaluate_residuals(reconstruct(build_profile(profile.orbit, params), params, spec))
        return {
            "eps": report.eps,
            "momentum1_L2": report.momentum1.l2,
            "momentum2_L2": report.momentum2.l2,
            "stress1": report.stress_bc1.l2,
            "stress2": report.stress_bc2.l2,
            "slip": report.slip_bc.l2,
            "flux": report.flux_eq.l2,
            "converged": report.converged,
        }

    return evaluate


def attach_orders(rows: list[dict[str, Any]]) -> float:
    """Fill ``fitted_order`` between consecutive successful rows; return the least-squares order."""
    previous: dict[str, Any] | None = None
    for row in rows:
        row["fitted_order"] = math.nan
        if row.get("status") != STATUS_OK:
            continue
        if previous is not None:
            row["fitted_order"] = fitted_order(
                previous["momentum1_L2"], row["momentum1_L2"], previous["eps"], row["eps"]
            )
        previous = row
    good = [(r["eps"], r["momentum1_L2"]) for r in rows if r.get("status") == STATUS_OK and r["momentum1_L2"] > 0]
    if len(good) < 2:
        return math.nan
    logs = np.log(np.array(good))
    return float(np.polyfit(logs[:, 0], logs[:, 1], 1)[0])
