"""Multi-phase image segmentation."""

import logging
import math
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.ndimage import gaussian_filter1d
from scipy.optimize import linear_sum_assignment

from pottsrf.core.config import ImageParams, SolverConfig
from pottsrf.core.exceptions import InvalidArgumentError, ShapeMismatchError
from pottsrf.core.models import Image, SolverReport
from pottsrf.forces.kmeans import kmeans_centroids
from pottsrf.forces.probabilities import image_probabilities
from pottsrf.forces.region import region_force_l2, region_force_linear, region_force_log
from pottsrf.graph.operators import grid_gradient
from pottsrf.solvers.backends import GridBackend
from pottsrf.solvers.base import assign_labels
from pottsrf.solvers.potts import create_solver

QUADRANT_COLORS = (
    (0.9, 0.1, 0.1),
    (0.1, 0.8, 0.2),
    (0.1, 0.2, 0.9),
    (0.9, 0.9, 0.2),
)


class SegmentationResult(NamedTuple):
    labels: np.ndarray
    report: SolverReport
    phi: np.ndarray
    centroids: np.ndarray


def gaussian_blur(image: Image, sigma: float) -> Image:
    """Separable Gaussian blur, kernel radius ceil(3 sigma), replicated border."""
    if sigma < 0:
        raise InvalidArgumentError(f"sigma must be nonnegative, got {sigma}")
    if sigma == 0:
        return image
    truncate = math.ceil(3.0 * sigma) / sigma
    values = image.values
    for axis in (0, 1):
        values = gaussian_filter1d(
            values, sigma, axis=axis, mode="nearest", truncate=truncate
        )
    return Image(values=values)


def edge_detector(
    image: Image,
    beta: float,
    gamma: float,
    sigma: float = 0.0,
    scale: float = 1.0,
) -> np.ndarray:
    """alpha(x) = beta / (1 + gamma |grad I_sigma(x)|^2), summed over channels."""
    if beta <= 0:
        raise InvalidArgumentError(f"beta must be positive, got {beta}")
    if gamma < 0:
        raise InvalidArgumentError(f"gamma must be nonnegative, got {gamma}")
    blurred = gaussian_blur(image, sigma)
    geom = blurred.geometry
    pixels = blurred.pixels() * scale
    grad_sq = np.zeros(geom.n_pixels)
    for c in range(pixels.shape[1]):
        g = grid_gradient(geom, pixels[:, c])
        grad_sq += np.sum(g**2, axis=1)
    return beta / (1.0 + gamma * grad_sq)


class ImageSegmenter:
    """Runs k-means, region forces, the edge detector and a Potts solve."""

    def __init__(self, params: ImageParams, solver_config: SolverConfig):
        """Initialize the segmenter."""
        self.params = params
        self.solver_config = solver_config
        self.logger = logging.getLogger(__name__)
        self.logger.setLevel(getattr(logging, solver_config.log_level.upper()))

    def region_forces(self, image: Image, centroids: np.ndarray) -> np.ndarray:
        p = self.params
        pixels = image.pixels()
        if p.region_force == "l2":
            return region_force_l2(pixels, centroids)
        P = image_probabilities(
            pixels, centroids, sigma=p.prob_sigma, squared=p.squared_distance
        )
        if p.region_force == "log":
            return region_force_log(P, p.delta)
        return region_force_linear(P)

    def segment(
        self, image: Image, centroids: Optional[np.ndarray] = None
    ) -> SegmentationResult:
        """Segment ``image``; k-means picks the centroids unless they are given."""
        p = self.params
        self.logger.info(
            "Segmenting %dx%d image into %d phases (%s force, %s)",
            image.width,
            image.height,
            p.k,
            p.region_force,
            self.solver_config.algorithm,
        )
        if centroids is None:
            centroids = kmeans_centroids(image.pixels(), p.k, rng_seed=p.rng_seed)
        else:
            centroids = np.asarray(centroids, dtype=float).reshape(p.k, -1)
        F = self.region_forces(image, centroids)
        alpha = edge_detector(
            image, p.beta, p.gamma, sigma=p.sigma, scale=p.intensity_scale
        )
        backend = GridBackend(image.geometry)
        result = create_solver(self.solver_config).solve(F, alpha, backend)
        labels = assign_labels(result.phi)
        if result.report.termination == "max_iter":
            self.logger.warning(
                "Iteration cap reached with gap %.3e; labels are from the last iterate",
                result.report.final_gap,
            )
        return SegmentationResult(
            labels=labels, report=result.report, phi=result.phi, centroids=centroids
        )


def segment_image(
    image: Image, params: ImageParams, solver_config: SolverConfig
) -> SegmentationResult:
    return ImageSegmenter(params, solver_config).segment(image)


def make_quadrant_image(
    size: int = 64,
    colors: Optional[Sequence[Sequence[float]]] = None,
    noise: float = 0.05,
    rng_seed: int = 0,
) -> Tuple[Image, np.ndarray]:
    """Four-quadrant RGB test image and its row-major ground-truth labels.

    Quadrants are numbered top-left 0, top-right 1, bottom-left 2,
    bottom-right 3.
    """
    if size < 2:
        raise InvalidArgumentError(f"size must be at least 2, got {size}")
    palette = np.asarray(colors if colors is not None else QUADRANT_COLORS, dtype=float)
    if palette.shape[0] != 4:
        raise InvalidArgumentError("exactly four quadrant colors are required")
    half = size // 2
    rows, cols = np.indices((size, size))
    truth = 2 * (rows >= half) + (cols >= half)
    values = palette[truth]
    if noise > 0:
        rng = np.random.default_rng(rng_seed)
        values = values + rng.normal(0.0, noise, values.shape)
    return Image(values=values), truth.ravel()


def matched_pixel_accuracy(
    labels: np.ndarray, truth: np.ndarray, n_classes: int
) -> float:
    """Pixel accuracy under the best one-to-one relabeling of predicted classes."""
    labels = np.asarray(labels, dtype=int).ravel()
    truth = np.asarray(truth, dtype=int).ravel()
    if labels.shape != truth.shape:
        raise ShapeMismatchError(f"{labels.size} labels vs {truth.size} ground truth")
    if labels.size == 0:
        raise InvalidArgumentError("cannot score an empty labeling")
    size = max(n_classes, int(labels.max()) + 1, int(truth.max()) + 1)
    overlap = np.zeros((size, size), dtype=np.int64)
    np.add.at(overlap, (labels, truth), 1)
    rows, cols = linear_sum_assignment(overlap, maximize=True)
    return float(overlap[rows, cols].sum()) / labels.size