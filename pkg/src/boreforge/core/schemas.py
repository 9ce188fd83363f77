"""Run configuration schemas.

Pydantic v2 models for the on-disk configuration document and the resolved
:class:`RunConfig` handed to the runner.  Unknown keys are rejected at every
level.  A resolved config dumps (``model_dump(mode="json")``) to the
``config`` block of every sidecar and validates back to an equal config.
"""

from __future__ import annotations

from enum import StrEnum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from boreforge.core.fields import Frame, GridSpec
from boreforge.core.orbit import ShootOpts
from boreforge.core.params import DimensionalParams, PhysParams, dimensionalize
from boreforge.core.perturbation.hyperbolic import FixedPointOpts
from boreforge.core.perturbation.registry import list_perturbations
from boreforge.core.sweep import SweepErrorPolicy
from boreforge.utils.errors import ParameterError


class Command(StrEnum):
    """Pipelines reachable from the command line."""

    CLASSIFY = "classify"
    ORBIT = "orbit"
    PROFILE = "profile"
    FIELDS = "fields"
    RESIDUAL = "residual"
    SWEEP = "sweep"
    PERTURB = "perturb"


class SweepKind(StrEnum):
    """What a sweep varies."""

    REGION = "region"
    ORBIT = "orbit"
    EPS = "eps"


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DimensionalModel(_Strict):
    """Dimensional parameters; converted with the flat A and eps."""

    mu: float = Field(gt=0, description="Dynamic viscosity per unit density")
    kappa: float = Field(gt=0, description="Along-slope gravity")
    a: float = Field(gt=0, description="Navier-slip coefficient")
    g: float = Field(ge=0, description="Vertical gravity")
    sigma: float = Field(default=0.0, ge=0, description="Surface tension per unit density")
    gamma: float = Field(gt=0, description="Traveling frame speed")

    def to_domain(self) -> DimensionalParams:
        """Domain dataclass."""
        return DimensionalParams(
            mu_d=self.mu,
            kappa=self.kappa,
            a_d=self.a,
            g_d=self.g,
            sigma_d=self.sigma,
            gamma_speed=self.gamma,
        )


class ParamsModel(_Strict):
    """Flat nondimensional keys, or a dimensional block plus A and eps."""

    mu: float | None = Field(default=None, description="Viscosity")
    a: float | None = Field(default=None, description="Navier-slip parameter")
    g: float | None = Field(default=None, description="Vertical gravity")
    A: float | None = Field(default=None, description="Flux parameter in (0, 1)")
    sigma: float = Field(default=0.0, description="Surface tension")
    eps: float = Field(default=0.1, description="Shallowness")
    dimensional: DimensionalModel | None = None

    @model_validator(mode="after")
    def check_one_source(self) -> ParamsModel:
        """Flat mu/a/g/sigma and the dimensional block are mutually exclusive."""
        flat = [k for k in ("mu", "a", "g") if getattr(self, k) is not None]
        if self.sigma != 0.0:
            flat.append("sigma")
        if self.dimensional is not None and flat:
            raise ValueError(f"give either dimensional or flat parameters, not both ({', '.join(flat)})")
        return self

    def region_point(self) -> tuple[float, float]:
        """(g, A) for classification; only g is needed in flat form."""
        if self.A is None:
            raise ParameterError("A is required")
        if self.dimensional is not None:
            return self.to_params().g, self.A
        if self.g is None:
            raise ParameterError("g is required")
        return self.g, self.A

    def to_params(self) -> PhysParams:
        """Validated nondimensional bundle.

        Raises:
            ParameterError: If flat keys are missing or a value is out of range.
        """
        if self.A is None:
            raise ParameterError("missing parameter(s): A")
        if self.dimensional is not None:
            params, _ = dimensionalize(self.dimensional.to_domain(), self.A, self.eps)
            return params
        mu, a, g = self.mu, self.a, self.g
        if mu is None or a is None or g is None:
            missing = [k for k in ("mu", "a", "g") if getattr(self, k) is None]
            raise ParameterError(f"missing parameter(s): {', '.join(missing)}")
        return PhysParams(mu=mu, a=a, g=g, A=self.A, sigma=self.sigma, eps=self.eps)


class GridOptions(_Strict):
    """Field grid options."""

    nx: int = Field(default=128, ge=5)
    ny: int = Field(default=33, ge=2)
    x_min: float | None = None
    x_max: float | None = None
    leading_only: bool = False
    frame: Frame = Frame.TRAVELING

    @field_validator("frame", mode="before")
    @classmethod
    def parse_frame(cls, v: object) -> object:
        """Accept the frame by value (``"lab"``, ``"traveling"``)."""
        return Frame(v) if isinstance(v, str) else v

    @model_validator(mode="after")
    def check_range(self) -> GridOptions:
        """Both or neither x bound, increasing."""
        if (self.x_min is None) != (self.x_max is None):
            raise ValueError("x_min and x_max must be given together")
        if self.x_min is not None and self.x_max is not None and not self.x_min < self.x_max:
            raise ValueError("x_min must be below x_max")
        return self

    def to_spec(self) -> GridSpec:
        """Domain grid specification."""
        x_range = None if self.x_min is None or self.x_max is None else (self.x_min, self.x_max)
        return GridSpec(
            nx=self.nx, ny=self.ny, x_range=x_range, leading_only=self.leading_only, frame=self.frame
        )


class OrbitOptions(_Strict):
    """Shooter options."""

    seed_offset: float = Field(default=1e-8, gt=0, le=1e-3)
    terminal_tol: float = Field(default=1e-9, gt=0)
    max_time: float = Field(default=1e4, gt=0)
    rtol: float = Field(default=1e-10, gt=0)
    atol: float = Field(default=1e-12, gt=0)
    sample_spacing: float = Field(default=0.05, gt=0)
    trap_tol: float = Field(default=1e-4, ge=0)

    def to_opts(self) -> ShootOpts:
        """Domain shooter options."""
        return ShootOpts(**self.model_dump())


class SweepOptions(_Strict):
    """Sweep options."""

    kind: SweepKind = SweepKind.REGION
    g_min: float = Field(default=0.0, ge=0)
    g_max: float = Field(default=40.0, ge=0)
    g_count: int = Field(default=200, ge=0)
    A_min: float = Field(default=0.005, gt=0, lt=1)
    A_max: float = Field(default=0.995, gt=0, lt=1)
    A_count: int = Field(default=200, ge=0)
    eps_values: list[float] = Field(default_factory=lambda: [0.2, 0.1, 0.05])
    on_error: SweepErrorPolicy = SweepErrorPolicy.SKIP_POINT
    threads: int | None = Field(default=None, ge=1)

    @field_validator("on_error", mode="before")
    @classmethod
    def parse_policy(cls, v: object) -> object:
        """Accept the policy by value (``"skip_point"``, ``"abort_sweep"``)."""
        return SweepErrorPolicy(v) if isinstance(v, str) else v

    @field_validator("eps_values")
    @classmethod
    def check_eps(cls, v: list[float]) -> list[float]:
        """Every ε in (0, 1)."""
        bad = [e for e in v if not 0.0 < e < 1.0]
        if bad:
            raise ValueError(f"eps values must lie in (0, 1): {bad}")
        return v


class PerturbationOptions(_Strict):
    """Perturbation family and λ set."""

    family: str = "gaussian_bump"
    lambdas: list[float] = Field(default_factory=lambda: [0.0, 1e-4])
    t0: float = 0.0
    width: float = Field(default=1.0, gt=0)
    c: float = 1.0
    step: float = Field(default=0.01, gt=0)
    tol: float = Field(default=1e-10, gt=0)
    workers: int = Field(default=1, ge=1)

    @field_validator("family")
    @classmethod
    def check_family(cls, v: str) -> str:
        """The family must be registered."""
        if v not in list_perturbations():
            raise ValueError(f"unknown perturbation family {v!r}; known: {', '.join(list_perturbations())}")
        return v

    @field_validator("lambdas")
    @classmethod
    def check_lambdas(cls, v: list[float]) -> list[float]:
        """At least one λ."""
        if not v:
            raise ValueError("lambdas must not be empty")
        return v

    def family_kwargs(self) -> dict[str, float]:
        """Constructor arguments of the selected family."""
        if self.family == "gaussian_bump":
            return {"t0": self.t0, "width": self.width}
        if self.family == "constant":
            return {"c": self.c}
        return {}

    def to_opts(self) -> FixedPointOpts:
        """Domain fixed-point options."""
        return FixedPointOpts(step=self.step, tol=self.tol)


class PlotOptions(_Strict):
    """SVG options."""

    svg: bool = False
    seeds: int = Field(default=12, ge=0)


class RunConfig(_Strict):
    """A fully resolved run."""

    command: Command
    params: ParamsModel = Field(default_factory=ParamsModel)
    output_dir: Path = Path("out")
    grid: GridOptions = Field(default_factory=GridOptions)
    orbit: OrbitOptions = Field(default_factory=OrbitOptions)
    sweep: SweepOptions = Field(default_factory=SweepOptions)
    perturbation: PerturbationOptions = Field(default_factory=PerturbationOptions)
    plot: PlotOptions = Field(default_factory=PlotOptions)


class ConfigFile(_Strict):
    """The on-disk document: flat parameter keys plus optional blocks."""

    command: Command | None = None
    mu: float | None = None
    a: float | None = None
    g: float | None = None
    A: float | None = None
    sigma: float | None = None
    eps: float | None = None
    dimensional: DimensionalModel | None = None
    output_dir: Path | None = None
    grid: GridOptions | None = None
    orbit: OrbitOptions | None = None
    sweep: SweepOptions | None = None
    perturbation: PerturbationOptions | None = None
    plot: PlotOptions | None = None
