"""SVG figures derived from the data products.

Plots are a convenience on top of the CSV/JSON contract.  The Agg backend is
forced, the SVG hash salt is fixed and the date metadata is dropped so that
identical inputs give identical files.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from pathlib import Path

import matplotlib


matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import LinearSegmentedColormap  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from boreforge.core.fields import FieldGrid, FlowPicture  # noqa: E402
from boreforge.core.landscape import BoundaryRow, Landscape  # noqa: E402
from boreforge.core.orbit import OrbitSolution  # noqa: E402
from boreforge.core.profile import ShallowProfile  # noqa: E402
from boreforge.utils.errors import OutputError  # noqa: E402


logger = logging.getLogger(__name__)

VIOLET_RED = LinearSegmentedColormap.from_list("violet_red", ["#5b0a91", "#c2185b", "#e53935"])
EBBING_COLOR = "#1f5fbf"
SURGING_COLOR = "#c62828"

matplotlib.rcParams["svg.hashsalt"] = "boreforge"


def save_svg(fig: Figure, path: Path) -> Path:
    """Write ``fig`` as a reproducible SVG and close it.

    Raises:
        OutputError: If the file cannot be written.
    """
    path = path.expanduser().resolve()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise OutputError(f"Cannot write {path}: {exc}") from exc
    finally:
        plt.close(fig)
    logger.info("SVG written path=%s", path)
    return path


def plot_region_boundaries(rows: Sequence[BoundaryRow], path: Path, g_max: float = 40.0) -> Path:
    """Ebbing/surging regions in the (A, g) plane."""
    fig, ax = plt.subplots(figsize=(6, 4))
    A = np.array([r.A for r in rows])
    lower = np.array([r.g_lower for r in rows])
    upper = np.array([r.g_upper for r in rows])
    ax.fill_between(A, 0.0, np.minimum(lower, g_max), color=EBBING_COLOR, alpha=0.35, label="C1 (ebbing)")
    ax.fill_between(A, np.minimum(upper, g_max), g_max, color=SURGING_COLOR, alpha=0.35, label="Cminus1 (surging)")
    ax.plot(A, lower, color=EBBING_COLOR)
    ax.plot(A, upper, color=SURGING_COLOR)
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, g_max)
    ax.set_xlabel("A")
    ax.set_ylabel("g")
    ax.legend(loc="upper left")
    return save_svg(fig, path)


def plot_phase_portrait(
    landscape: Landscape,
    path: Path,
    orbit: OrbitSolution | None = None,
    n: int = 21,
) -> Path:
    """Liénard field, trapping region boundary and (optionally) the orbit."""
    lo, hi = landscape.eq.rho_minus, landscape.rho_star
    xs = np.linspace(lo, hi, 401)
    cap = landscape.v_cap(xs)
    pad = 0.15 * (hi - lo)
    vmax = 1.15 * float(np.max(cap)) if np.max(cap) > 0 else 1.0
    X1, X2 = np.meshgrid(np.linspace(lo - pad, hi + pad, n), np.linspace(-vmax, vmax, n))
    D1, D2 = landscape.field(X1, X2)
    norm = np.hypot(D1, D2)
    norm[norm == 0] = 1.0

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.quiver(X1, X2, D1 / norm, D2 / norm, norm, cmap=VIOLET_RED, angles="xy")
    ax.plot(xs, cap, color="black", linewidth=1.0)
    ax.plot(xs, -cap, color="black", linewidth=1.0)
    ax.plot([lo, hi], [0.0, 0.0], "o", color="black", markersize=3)
    if orbit is not None:
        ax.plot(orbit.rho, orbit.rho_prime, color=SURGING_COLOR if orbit.chirality.iota < 0 else EBBING_COLOR)
    ax.set_xlabel("x₁ = ρ")
    ax.set_ylabel("x₂ = ρ′")
    return save_svg(fig, path)


def plot_profile(profile: ShallowProfile, path: Path, samples: int = 401) -> Path:
    """Height H and velocity U of the shallow-water profile."""
    lo, hi = profile.orbit.t_range
    x = np.linspace(lo, hi, samples)
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(6, 5))
    top.plot(x, profile.H(x), color=EBBING_COLOR)
    top.set_ylabel("H")
    bottom.plot(x, profile.U(x), color=SURGING_COLOR)
    bottom.set_ylabel("U")
    bottom.set_xlabel("x")
    return save_svg(fig, path)


def plot_fields(grid: FieldGrid, picture: FlowPicture, path: Path) -> Path:
    """Vorticity in the physical fluid domain with traveling-frame streamlines."""
    x = grid.x_nodes
    z = grid.physical_heights()
    Xg = np.broadcast_to(x, z.shape)
    fig, ax = plt.subplots(figsize=(7, 3))
    mesh = ax.pcolormesh(Xg, z, picture.omega, shading="gouraud", cmap=VIOLET_RED)
    fig.colorbar(mesh, ax=ax, label="ω")
    ax.plot(x, grid.eps * grid.zeta, color="black", linewidth=1.0)
    for line in picture.streamlines:
        ax.plot(line.x, line.z, color="white", linewidth=0.6)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    return save_svg(fig, path)
