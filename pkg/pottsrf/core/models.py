"""Data models for pottsrf."""

from typing import Any, Dict, List, Literal, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class GridGeometry(BaseModel):
    """Pixel grid dimensions. Fields on a grid are flattened row-major."""

    model_config = ConfigDict(frozen=True)

    width: int = Field(ge=1, description="Image width in pixels")
    height: int = Field(ge=1, description="Image height in pixels")

    @property
    def n_pixels(self) -> int:
        return self.width * self.height

    @property
    def shape(self) -> tuple:
        return (self.height, self.width)


class SeedSet(BaseModel):
    """Labelled node indices, one list per class."""

    classes: List[List[int]] = Field(description="Seed indices S_k for each class k")

    @field_validator("classes")
    @classmethod
    def _check_disjoint(cls, v: List[List[int]]) -> List[List[int]]:
        if not v:
            raise ValueError("seed set needs at least one class")
        seen: set = set()
        for members in v:
            if any(i < 0 for i in members):
                raise ValueError("seed indices must be nonnegative")
            overlap = seen.intersection(members)
            if overlap or len(set(members)) != len(members):
                raise ValueError(f"seed lists overlap at {sorted(overlap) or members}")
            seen.update(members)
        if not seen:
            raise ValueError("every seed class is empty")
        return [sorted(int(i) for i in members) for members in v]

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def indices(self) -> np.ndarray:
        flat = sorted(i for members in self.classes for i in members)
        return np.array(flat, dtype=int)

    def label_map(self) -> Dict[int, int]:
        """Map each seeded node index to its class."""
        return {i: k for k, members in enumerate(self.classes) for i in members}

    def permuted(self, order: List[int]) -> "SeedSet":
        """Return the seed set with class k moved to position order.index(k)."""
        return SeedSet(classes=[self.classes[k] for k in order])


class Dataset(BaseModel):
    """Point cloud with ground-truth labels."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    points: np.ndarray = Field(description="N x D coordinates")
    labels: np.ndarray = Field(description="Length-N class indices")
    n_classes: int = Field(ge=1, description="Class count K")
    name: str = Field(default="dataset", description="Dataset name used in reports")

    @model_validator(mode="after")
    def _check_shapes(self) -> "Dataset":
        self.points = np.asarray(self.points, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.points.ndim != 2:
            raise ValueError("points must be a 2-D array")
        if self.labels.shape != (self.points.shape[0],):
            raise ValueError(
                f"{self.points.shape[0]} points but {self.labels.shape[0]} labels"
            )
        if not np.all(np.isfinite(self.points)):
            raise ValueError("points contain non-finite coordinates")
        if self.labels.size and (
            self.labels.min() < 0 or self.labels.max() >= self.n_classes
        ):
            raise ValueError(f"labels must lie in [0, {self.n_classes})")
        if self.points.shape[0] < self.n_classes:
            raise ValueError("fewer points than classes")
        return self

    @property
    def n_points(self) -> int:
        return int(self.points.shape[0])


class SolverReport(BaseModel):
    """Convergence record of one Potts solve."""

    algorithm: str = Field(description="pdhg or admm")
    iterations: int = Field(ge=0, description="Iterations performed")
    primal_energy_history: List[float] = Field(default_factory=list)
    dual_energy_history: List[float] = Field(default_factory=list)
    final_gap: float = Field(description="Relative (or absolute) duality gap")
    primal_energy: float = Field(description="Primal energy of the returned field")
    dual_energy: float = Field(description="Dual energy of the returned flow")
    wall_time_s: float = Field(description="Solve time in seconds")
    termination: Literal["gap", "max_iter"] = Field(description="Why the solve stopped")

    def summary(self) -> Dict[str, Any]:
        """Fields written to report JSON files."""
        return self.model_dump(
            include={
                "algorithm",
                "iterations",
                "final_gap",
                "primal_energy",
                "dual_energy",
                "wall_time_s",
                "termination",
            }
        )

    def to_history_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "iter": np.arange(1, len(self.primal_energy_history) + 1),
                "E_P": self.primal_energy_history,
                "E_D": self.dual_energy_history,
            }
        )


class TrialResult(BaseModel):
    """Outcome of one clustering trial."""

    trial: int = Field(default=0, description="Trial index within a run")
    rng_seed: int = Field(description="Seed used for seed sampling")
    region_force: str = Field(description="Region force kind")
    accuracy: float = Field(ge=0, le=1, description="Accuracy over all points")
    unlabeled_accuracy: float = Field(
        ge=0, le=1, description="Accuracy over points that were not seeded"
    )
    unclamped_accuracy: float = Field(
        ge=0, le=1, description="Accuracy before forcing seeded labels"
    )
    probability_accuracy: float = Field(
        ge=0, le=1, description="Accuracy of argmax of the probabilities alone"
    )
    seed_indices: List[int] = Field(description="Seeded node indices")
    report: SolverReport

    def summary(self) -> Dict[str, Any]:
        data = self.model_dump(exclude={"report"})
        data["report"] = self.report.summary()
        return data


class TrialAggregate(BaseModel):
    """Aggregate over repeated clustering trials."""

    run_id: str = Field(description="Identifier of the run")
    algorithm: str
    region_force: str
    n_trials: int = Field(ge=1)
    n_seeds: int = Field(ge=1)
    base_seed: int
    mean_accuracy: float
    std_accuracy: float
    mean_unlabeled_accuracy: float
    mean_probability_accuracy: float
    std_probability_accuracy: float
    mean_iterations: float
    mean_wall_time_s: float
    mean_final_gap: float
    trials: Optional[List[TrialResult]] = Field(
        default=None, description="Per-trial results, omitted in summaries"
    )


class Image(BaseModel):
    """Raster image with channel values in [0, 1]."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    values: np.ndarray = Field(description="height x width x channels array")

    @model_validator(mode="after")
    def _check_values(self) -> "Image":
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 2:
            values = values[:, :, None]
        if values.ndim != 3 or values.shape[2] not in (1, 3):
            raise ValueError("image must be H x W with 1 or 3 channels")
        if values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError("image dimensions must be positive")
        if not np.all(np.isfinite(values)):
            raise ValueError("image contains non-finite values")
        self.values = np.clip(values, 0.0, 1.0)
        return self

    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    @property
    def channels(self) -> int:
        return int(self.values.shape[2])

    @property
    def geometry(self) -> GridGeometry:
        return GridGeometry(width=self.width, height=self.height)

    def pixels(self) -> np.ndarray:
        """Row-major N x C matrix of channel values."""
        return self.values.reshape(-1, self.channels)
