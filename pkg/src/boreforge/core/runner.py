"""Command pipelines behind the CLI.

:func:`run` dispatches a resolved :class:`~boreforge.core.schemas.RunConfig`
to its pipeline, writes the data products under ``output_dir`` and maps
failures to exit codes: 0 on success, 2 for domain errors the user can fix
(Excluded region, bad parameters or configuration), 1 for internal errors.
Every data file gets a ``.meta.json`` sidecar holding the resolved config.
"""

from __future__ import annotations

import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np

from boreforge.core.fields import reconstruct, streamlines_and_vorticity
from boreforge.core.landscape import Landscape, classify, region_boundary_curve
from boreforge.core.orbit import (
    EquilibriumSite,
    count_turns,
    energy_audit,
    linearize,
    profile_shape,
    shoot_heteroclinic,
)
from boreforge.core.output.writer import write_csv, write_json
from boreforge.core.params import PhysParams
from boreforge.core.perturbation.bore import ORBIT_COLUMNS, perturbed_bore
from boreforge.core.perturbation.registry import get_perturbation
from boreforge.core.profile import (
    PROFILE_COLUMNS,
    build_profile,
    end_limits,
    profile_bounds,
    verify_lienard_equivalence,
)
from boreforge.core.residual import evaluate_residuals, flux_equivalence_gap
from boreforge.core.schemas import Command, RunConfig, SweepKind
from boreforge.core.sweep import (
    EPS_COLUMNS,
    ORBIT_SWEEP_COLUMNS,
    REGION_COLUMNS,
    SweepEngine,
    attach_orders,
    eps_points,
    eps_row_factory,
    grid_points,
    orbit_row_factory,
    region_row,
    resolve_threads,
)
from boreforge.utils.errors import BoreforgeError, ConfigValidationError, DomainError, ExcludedRegionError


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_DOMAIN = 2

ORBIT_CSV_COLUMNS: tuple[str, ...] = ("t", "rho", "rho_prime")
BOUNDARY_SAMPLES = 199


def _meta(config: RunConfig) -> dict[str, Any]:
    return config.model_dump(mode="json")


def _out(config: RunConfig, name: str) -> Path:
    return config.output_dir / name


# -- Pipelines -----------------------------------------------------------------------


def run_classify(config: RunConfig) -> int:
    """Print the region label of (g, A); Excluded exits with code 2."""
    g, A = config.params.region_point()
    c = classify(g, A)
    sys.stdout.write(f"{c.region.label}\n")
    if c.chirality.iota == 0:
        sys.stdout.write(f"g_lower={c.g_lower:.17g} g_upper={c.g_upper:.17g}\n")
        return EXIT_DOMAIN
    return EXIT_OK


def run_orbit(config: RunConfig) -> int:
    """Shoot the heteroclinic orbit and write orbit.csv plus orbit.json."""
    params = config.params.to_params()
    landscape = Landscape.build(params)
    orbit = shoot_heteroclinic(params, landscape, config.orbit.to_opts())
    meta = _meta(config)
    path = write_csv(
        _out(config, "orbit.csv"),
        ORBIT_CSV_COLUMNS,
        ({"t": t, "rho": r, "rho_prime": v} for t, r, v in zip(orbit.t, orbit.rho, orbit.rho_prime, strict=True)),
        meta,
    )
    audit = energy_audit(orbit, landscape)
    spectrum = linearize(EquilibriumSite.RHO_PLUS, landscape)
    summary = {
        **orbit.metadata(),
        "energy_defect": audit.defect,
        "profile_shape": profile_shape(landscape).value,
        "turns": count_turns(orbit),
        "rho_plus_eigenvalues": [
            [float(e.real), float(e.imag)] for e in (spectrum.lambda_minus, spectrum.lambda_plus)
        ],
    }
    write_json(_out(config, "orbit.json"), summary, meta)
    if config.plot.svg:
        from boreforge.core.output.plots import plot_phase_portrait

        plot_phase_portrait(landscape, _out(config, "phase.svg"), orbit)
    sys.stdout.write(f"Orbit written to {path} ({len(orbit.t)} samples, {orbit.chirality.name.lower()}).\n")
    return EXIT_OK


def run_profile(config: RunConfig) -> int:
    """Build the shallow-water profile; write profile.csv and the check report."""
    params = config.params.to_params()
    orbit = shoot_heteroclinic(params, Landscape.build(params), config.orbit.to_opts())
    profile = build_profile(orbit, params)
    meta = _meta(config)
    path = write_csv(_out(config, "profile.csv"), PROFILE_COLUMNS, profile.table(), meta)
    lienard = verify_lienard_equivalence(profile)
    bounds = profile_bounds(profile)
    checks = {
        "tuned": {"gamma_bar": profile.tuned.gamma_bar, "A_bar": profile.tuned.A_bar},
        "lienard": {
            "h_form": lienard.h_form,
            "momentum": lienard.momentum,
            "mass": lienard.mass,
            "passed": lienard.passed(),
        },
        "limits": [
            {"name": c.name, "end": c.end, "expected": c.expected, "actual": c.actual, "error": c.error}
            for c in end_limits(profile)
        ],
        "bounds": {
            "h_min": bounds.h_min,
            "h_max": bounds.h_max,
            "u_max": bounds.u_max,
            "gap_min": bounds.gap_min,
            "holds": bounds.holds(),
        },
    }
    write_json(_out(config, "profile_checks.json"), checks, meta)
    if config.plot.svg:
        from boreforge.core.output.plots import plot_profile

        plot_profile(profile, _out(config, "profile.svg"))
    sys.stdout.write(f"Profile written to {path} ({len(orbit.t)} samples).\n")
    return EXIT_OK


def run_fields(config: RunConfig) -> int:
    """Reconstruct the fields on a grid; write fields.json and optionally fields.svg."""
    params = config.params.to_params()
    orbit = shoot_heteroclinic(params, Landscape.build(params), config.orbit.to_opts())
    grid = reconstruct(build_profile(orbit, params), params, config.grid.to_spec())
    path = write_json(_out(config, "fields.json"), grid.to_dict(), _meta(config))
    if config.plot.svg:
        from boreforge.core.output.plots import plot_fields

        picture = streamlines_and_vorticity(grid, config.plot.seeds)
        plot_fields(grid, picture, _out(config, "fields.svg"))
    sys.stdout.write(f"Fields written to {path} ({grid.ny}x{grid.nx} nodes).\n")
    return EXIT_OK


def run_residual(config: RunConfig) -> int:
    """Evaluate the Navier-Stokes residuals of the reconstructed fields."""
    params = config.params.to_params()
    orbit = shoot_heteroclinic(params, Landscape.build(params), config.orbit.to_opts())
    grid = reconstruct(build_profile(orbit, params), params, config.grid.to_spec())
    report = evaluate_residuals(grid)
    payload = {**report.to_dict(), "flux_equivalence_gap": flux_equivalence_gap(grid)}
    path = write_json(_out(config, "residual.json"), payload, _meta(config))
    sys.stdout.write(f"Residuals written to {path} (max sup {report.max_sup():.3e}).\n")
    return EXIT_OK


def run_sweep(config: RunConfig) -> int:
    """Run a region, orbit or ε sweep into one aggregate CSV."""
    opts = config.sweep
    workers = resolve_threads(requested=opts.threads)
    meta = _meta(config)
    g_range, A_range = (opts.g_min, opts.g_max), (opts.A_min, opts.A_max)
    overall: float | None = None

    if opts.kind is SweepKind.REGION:
        engine = SweepEngine(region_row, REGION_COLUMNS, opts.on_error, workers)
        result = engine.run(grid_points(g_range, opts.g_count, A_range, opts.A_count))
        name = "region_sweep.csv"
        if config.plot.svg and opts.A_count > 0:
            from boreforge.core.output.plots import plot_region_boundaries

            A_samples = np.linspace(opts.A_min, opts.A_max, BOUNDARY_SAMPLES).tolist()
            plot_region_boundaries(region_boundary_curve(A_samples), _out(config, "regions.svg"), opts.g_max)
    elif opts.kind is SweepKind.ORBIT:
        evaluate = orbit_row_factory(_orbit_base(config), config.orbit.to_opts())
        engine = SweepEngine(evaluate, ORBIT_SWEEP_COLUMNS, opts.on_error, workers)
        result = engine.run(grid_points(g_range, opts.g_count, A_range, opts.A_count))
        name = "orbit_sweep.csv"
    else:
        params = config.params.to_params()
        orbit = shoot_heteroclinic(params, Landscape.build(params), config.orbit.to_opts())
        profile = build_profile(orbit, params)
        evaluate = eps_row_factory(profile, config.grid.to_spec())
        engine = SweepEngine(evaluate, EPS_COLUMNS, opts.on_error, workers)
        result = engine.run(eps_points(opts.eps_values))
        overall = attach_orders(result.rows)
        name = "eps_sweep.csv"

    path = write_csv(_out(config, name), result.columns, result.rows, meta)
    if overall is not None:
        write_json(_out(config, "eps_sweep.json"), {"overall_order": overall}, meta)
    sys.stdout.write(f"Sweep written to {path} ({len(result.rows)} points, {result.failed} failed).\n")
    return EXIT_OK


def _orbit_base(config: RunConfig) -> PhysParams:
    # g and A of the base are replaced per point; only μ, a, σ and ε matter.
    model = config.params
    fill: dict[str, float] = {}
    if model.A is None:
        fill["A"] = 0.5
    if model.dimensional is None and model.g is None:
        fill["g"] = 0.0
    if fill:
        model = model.model_copy(update=fill)
    return model.to_params()


def run_perturb(config: RunConfig) -> int:
    """Perturbed bore family; one CSV per λ plus perturbation.json."""
    params = config.params.to_params()
    orbit = shoot_heteroclinic(params, Landscape.build(params), config.orbit.to_opts())
    opts = config.perturbation
    try:
        psi = get_perturbation(opts.family, **opts.family_kwargs())
    except ValueError as err:
        raise ConfigValidationError(str(err)) from err
    study = perturbed_bore(orbit, psi, opts.lambdas, opts.to_opts(), workers=opts.workers)
    meta = _meta(config)
    for index, member in enumerate(study.members):
        write_csv(_out(config, f"perturbed_{index:03d}.csv"), ORBIT_COLUMNS, member.rows(), meta)
    path = write_json(_out(config, "perturbation.json"), study.summary(), meta)
    ratio = "n/a" if study.lipschitz_ratio is None else f"{study.lipschitz_ratio:.6g}"
    sys.stdout.write(
        f"Perturbation study written to {path} ({len(study.members)} members, Lipschitz ratio {ratio}).\n"
    )
    return EXIT_OK


PIPELINES: dict[Command, Callable[[RunConfig], int]] = {
    Command.CLASSIFY: run_classify,
    Command.ORBIT: run_orbit,
    Command.PROFILE: run_profile,
    Command.FIELDS: run_fields,
    Command.RESIDUAL: run_residual,
    Command.SWEEP: run_sweep,
    Command.PERTURB: run_perturb,
}


def run(config: RunConfig) -> int:
    """Execute ``config`` and map failures to exit codes.

    Args:
        config: A resolved run configuration.

    Returns:
        0 on success, 2 on domain errors, 1 on internal errors.
    """
    pipeline = PIPELINES[config.command]
    logger.debug("Running command=%s output_dir=%s", config.command, config.output_dir)
    try:
        return pipeline(config)
    except ExcludedRegionError as err:
        sys.stdout.write("Excluded\n")
        sys.stdout.write(f"g_lower={err.g_lower:.17g} g_upper={err.g_upper:.17g}\n")
        sys.stderr.write(f"Error: {err}\n")
        return EXIT_DOMAIN
    except DomainError as err:
        sys.stderr.write(f"Error: {err}\n")
        return EXIT_DOMAIN
    except BoreforgeError as err:
        logger.debug("Internal failure", exc_info=True)
        sys.stderr.write(f"Error: {type(err).__name__}: {err}\n")
        return EXIT_INTERNAL
    except Exception as err:
        logger.debug("Unexpected failure", exc_info=True)
        sys.stderr.write(f"Error: {type(err).__name__}: {err}\n")
        return EXIT_INTERNAL
