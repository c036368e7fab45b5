"""Configuration settings for pottsrf."""

from pathlib import Path
from typing import Any, Dict, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from pottsrf.core.exceptions import ConfigurationError

Algorithm = Literal["pdhg", "admm"]
TVFlavor = Literal["isotropic-grid", "anisotropic-graph"]
WeightKind = Literal["rbf", "zmp", "cosine"]
RegionForceKind = Literal["log", "linear", "l2"]

# Dual step used when none is configured; ADMM takes a much smaller one.
DEFAULT_BETA = {"pdhg": 0.4, "admm": 0.05}


class SolverConfig(BaseModel):
    """Configuration for the PDHG and ADMM Potts solvers."""

    model_config = ConfigDict(extra="forbid")

    algorithm: Algorithm = Field(default="pdhg", description="Solver algorithm")
    beta: Optional[float] = Field(
        default=None,
        gt=0,
        description="Dual step size. If None, 0.4 for PDHG and 0.05 for ADMM",
    )
    gamma: float = Field(default=0.4, gt=0, description="Primal step size (PDHG)")
    theta: float = Field(default=-0.5, description="Extrapolation weight (PDHG)")
    c: float = Field(default=0.1, gt=0, description="Augmented Lagrangian penalty")
    epsilon: float = Field(
        default=1e-5, gt=0, description="Relative duality gap tolerance"
    )
    max_iter: int = Field(default=2500, ge=1, description="Iteration cap")
    tv_flavor: Optional[TVFlavor] = Field(
        default=None,
        description="Expected TV flavor; checked against the backend when set",
    )
    step_schedule: Literal["constant", "increasing"] = Field(
        default="constant",
        description=(
            "PDHG per-iteration step rule. 'increasing' uses beta_l = 0.5 l and "
            "gamma_l = 0.5 / (1 + 0.1 l). ADMM always takes a constant beta"
        ),
    )
    literal_ordering: bool = Field(
        default=False,
        description=(
            "PDHG: take the gradient of phi (not the extrapolation) and the "
            "divergence of the previous dual iterate"
        ),
    )
    uniform_init: bool = Field(
        default=False, description="Start from uniform 1/K rows instead of argmin"
    )
    deterministic: bool = Field(
        default=True, description="Fixed-order reductions, single-threaded"
    )
    log_level: str = Field(default="INFO", description="Logging level for solvers")

    @property
    def effective_beta(self) -> float:
        return self.beta if self.beta is not None else DEFAULT_BETA[self.algorithm]

    def step_sizes(self, iteration: int) -> Tuple[float, float]:
        """Return (beta_l, gamma_l) for a 1-based iteration counter."""
        if self.step_schedule == "increasing" and self.algorithm == "pdhg":
            return 0.5 * iteration, 0.5 / (1.0 + 0.1 * iteration)
        return self.effective_beta, self.gamma


class ClusterParams(BaseModel):
    """Parameters for the semi-supervised clustering pipeline."""

    model_config = ConfigDict(extra="forbid")

    s: int = Field(default=10, ge=1, description="Neighbors per node in the s-NN graph")
    weight_kind: WeightKind = Field(default="zmp", description="Edge weight kernel")
    rbf_epsilon: float = Field(default=1.0, gt=0, description="RBF kernel width")
    m: Literal[1, 2] = Field(default=2, description="Diffusion power")
    alpha: float = Field(ge=0, description="Constant TV weight")
    region_force: Literal["log", "linear"] = Field(
        default="log", description="Region force kind"
    )
    delta: float = Field(default=1e-3, ge=0, description="Log force regularizer")
    clamp_seeds: bool = Field(
        default=True, description="Force seeded points to their known class"
    )


class ImageParams(BaseModel):
    """Parameters for the image segmentation pipeline."""

    model_config = ConfigDict(extra="forbid")

    k: int = Field(default=4, ge=2, description="Number of phases")
    region_force: RegionForceKind = Field(default="log", description="Region force")
    beta: float = Field(default=0.6, gt=0, description="Edge detector numerator")
    gamma: float = Field(default=50.0, ge=0, description="Edge detector sensitivity")
    sigma: float = Field(default=0.0, ge=0, description="Blur before edge detection")
    prob_sigma: float = Field(
        default=1.0, gt=0, description="Gaussian model deviation for probabilities"
    )
    squared_distance: bool = Field(
        default=False, description="Square the color distance in the probabilities"
    )
    intensity_scale: float = Field(
        default=1.0, gt=0, description="Scale applied to intensities for gradients"
    )
    delta: float = Field(default=1e-3, ge=0, description="Log force regularizer")
    rng_seed: int = Field(default=0, description="Seed for kmeans initialization")


class RunConfig(BaseModel):
    """Flat run configuration read from key=value files and CLI flags."""

    model_config = ConfigDict(extra="forbid")

    # solver
    algorithm: Algorithm = "pdhg"
    beta: Optional[float] = Field(default=None, gt=0)
    gamma: float = Field(default=0.4, gt=0)
    theta: float = -0.5
    c: float = Field(default=0.1, gt=0)
    epsilon: float = Field(default=1e-5, gt=0)
    max_iter: int = Field(default=2500, ge=1)
    step_schedule: Literal["constant", "increasing"] = "constant"
    literal_ordering: bool = False
    uniform_init: bool = False

    # clustering
    s: int = Field(default=10, ge=1)
    weight_kind: WeightKind = "zmp"
    rbf_epsilon: float = Field(default=1.0, gt=0)
    m: Literal[1, 2] = 2
    alpha: Optional[float] = Field(default=None, ge=0)
    delta: float = Field(default=1e-3, ge=0)
    region_force: RegionForceKind = "log"
    n_seeds: int = Field(default=50, ge=1)
    n_trials: int = Field(default=10, ge=1)
    stratified: bool = False
    clamp_seeds: bool = True

    # imaging
    k: int = Field(default=4, ge=1)
    beta_img: float = Field(default=0.6, gt=0)
    gamma_img: float = Field(default=50.0, ge=0)
    sigma_img: float = Field(default=0.0, ge=0)
    prob_sigma: float = Field(default=1.0, gt=0)
    squared_distance: bool = False
    intensity_scale: float = Field(default=1.0, gt=0)

    # run
    rng_seed: int = 0
    threads: int = Field(default=1, ge=1)
    log_level: str = "INFO"
    output_dir: Optional[Path] = None
    data: Optional[Path] = None
    labels: Optional[Path] = None

    @model_validator(mode="after")
    def _check_log_level(self) -> "RunConfig":
        if self.log_level.upper() not in {"DEBUG", "INFO", "WARNING", "ERROR"}:
            raise ValueError(f"unknown log_level {self.log_level!r}")
        self.log_level = self.log_level.upper()
        return self

    @classmethod
    def from_mapping(cls, values: Dict[str, Any]) -> "RunConfig":
        """Validate a flat mapping, turning pydantic errors into key diagnostics."""
        try:
            return cls.model_validate(values)
        except ValidationError as e:
            raise ConfigurationError(_describe_errors(e)) from e

    @classmethod
    def from_file(
        cls,
        path: Union[str, Path],
        overrides: Optional[Dict[str, Any]] = None,
    ) -> "RunConfig":
        """Read a key=value config file and apply CLI overrides on top."""
        from pottsrf.utils.config_file import read_config_file

        values = read_config_file(path)
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.from_mapping(values)

    def solver_config(self, deterministic: Optional[bool] = None) -> SolverConfig:
        return SolverConfig(
            algorithm=self.algorithm,
            beta=self.beta,
            gamma=self.gamma,
            theta=self.theta,
            c=self.c,
            epsilon=self.epsilon,
            max_iter=self.max_iter,
            step_schedule=self.step_schedule,
            literal_ordering=self.literal_ordering,
            uniform_init=self.uniform_init,
            deterministic=self.threads == 1 if deterministic is None else deterministic,
            log_level=self.log_level,
        )

    def cluster_params(self) -> ClusterParams:
        if self.alpha is None:
            raise ConfigurationError("missing required key 'alpha'")
        if self.region_force == "l2":
            raise ConfigurationError(
                "region_force: 'l2' needs image centroids and is not available "
                "for clustering"
            )
        return ClusterParams(
            s=self.s,
            weight_kind=self.weight_kind,
            rbf_epsilon=self.rbf_epsilon,
            m=self.m,
            alpha=self.alpha,
            region_force=self.region_force,
            delta=self.delta,
            clamp_seeds=self.clamp_seeds,
        )

    def image_params(self) -> ImageParams:
        if self.k < 2:
            raise ConfigurationError(f"k: at least 2 phases required, got {self.k}")
        return ImageParams(
            k=self.k,
            region_force=self.region_force,
            beta=self.beta_img,
            gamma=self.gamma_img,
            sigma=self.sigma_img,
            prob_sigma=self.prob_sigma,
            squared_distance=self.squared_distance,
            intensity_scale=self.intensity_scale,
            delta=self.delta,
            rng_seed=self.rng_seed,
        )


def _describe_errors(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        key = ".".join(str(p) for p in item["loc"]) or "<config>"
        if item["type"] == "extra_forbidden":
            parts.append(f"unknown key '{key}'")
        elif item["type"] == "missing":
            parts.append(f"missing required key '{key}'")
        else:
            parts.append(f"{key}: {item['msg']}")
    return "; ".join(parts)
