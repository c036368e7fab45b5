"""Benchmark datasets and labelled seed sampling."""

import logging
from pathlib import Path
from typing import List, Union

import numpy as np
from pydantic import ValidationError

from pottsrf.core.exceptions import (
    DatasetParseError,
    InvalidArgumentError,
    SeedingError,
)
from pottsrf.core.models import Dataset, SeedSet
from pottsrf.utils.importer import CsvImporter

logger = logging.getLogger(__name__)

MAX_SEED_ATTEMPTS = 100


def gen_three_circles(
    rng_seed: int = 0,
    n_points: int = 6000,
    dim: int = 100,
    noise_variance: float = 0.16,
    add_noise: bool = True,
    arc_length: bool = False,
) -> Dataset:
    """
    Sample points on concentric circles of radius 1, 2 and 3.

    Points are embedded in ``dim`` dimensions by zero padding and then
    perturbed by Gaussian noise in every coordinate. Class k lies on the
    circle of radius k + 1.

    Args:
        rng_seed: Seed for the generator
        n_points: Number of points
        dim: Embedding dimension (at least 2)
        noise_variance: Variance of the additive noise
        add_noise: Disable to keep points exactly on their circles
        arc_length: Pick circles proportionally to their length instead of
            uniformly

    Returns:
        Dataset with K = 3
    """
    if dim < 2:
        raise InvalidArgumentError(f"dim must be at least 2, got {dim}")
    if n_points < 3:
        raise InvalidArgumentError(f"need at least 3 points, got {n_points}")
    if noise_variance < 0:
        raise InvalidArgumentError("noise_variance must be nonnegative")

    rng = np.random.default_rng(rng_seed)
    radii = np.array([1.0, 2.0, 3.0])
    weights = radii / radii.sum() if arc_length else None
    labels = rng.choice(3, size=n_points, p=weights)
    angles = rng.uniform(0.0, 2.0 * np.pi, size=n_points)

    points = np.zeros((n_points, dim))
    points[:, 0] = radii[labels] * np.cos(angles)
    points[:, 1] = radii[labels] * np.sin(angles)
    if add_noise:
        points += rng.normal(0.0, np.sqrt(noise_variance), size=points.shape)

    logger.info(
        "Generated three circles: %d points in R^%d, class sizes %s",
        n_points,
        dim,
        np.bincount(labels, minlength=3).tolist(),
    )
    return Dataset(points=points, labels=labels, n_classes=3, name="three-circles")


def load_dataset(
    points_path: Union[str, Path], labels_path: Union[str, Path]
) -> Dataset:
    """Read a point CSV and a label CSV; K is the largest label plus one."""
    points = CsvImporter.import_points(points_path)
    labels = CsvImporter.import_labels(labels_path)
    if points.shape[0] != labels.shape[0]:
        raise DatasetParseError(
            f"{points.shape[0]} points in {points_path} but "
            f"{labels.shape[0]} labels",
            path=labels_path,
        )
    try:
        return Dataset(
            points=points,
            labels=labels,
            n_classes=int(labels.max()) + 1,
            name=Path(points_path).stem,
        )
    except ValidationError as e:
        raise DatasetParseError(e.errors()[0]["msg"], path=points_path)


def _stratified_counts(sizes: np.ndarray, n_seeds: int) -> np.ndarray:
    """Largest-remainder split of n_seeds across classes, at least one each."""
    share = n_seeds * sizes / sizes.sum()
    counts = np.maximum(np.floor(share).astype(int), 1)
    remainder = share - np.floor(share)
    for k in np.argsort(-remainder, kind="stable"):
        if counts.sum() >= n_seeds:
            break
        if counts[k] < sizes[k]:
            counts[k] += 1
    while counts.sum() > n_seeds:
        candidates = np.flatnonzero(counts > 1)
        counts[candidates[np.argmax(counts[candidates])]] -= 1
    return np.minimum(counts, sizes)


def sample_seeds(
    dataset: Dataset,
    n_seeds: int,
    rng_seed: int = 0,
    stratified: bool = False,
) -> SeedSet:
    """
    Draw labelled seeds without replacement.

    Uniform sampling redraws the whole set until every class has a seed.
    Stratified sampling splits ``n_seeds`` proportionally to class sizes.

    Raises:
        InvalidArgumentError: If n_seeds is outside [K, N]
        SeedingError: If some class cannot receive a seed
    """
    N, K = dataset.n_points, dataset.n_classes
    if not K <= n_seeds <= N:
        raise InvalidArgumentError(f"n_seeds must lie in [{K}, {N}], got {n_seeds}")

    rng = np.random.default_rng(rng_seed)
    labels = dataset.labels
    sizes = np.bincount(labels, minlength=K)

    if stratified:
        if np.any(sizes == 0):
            empty = np.flatnonzero(sizes == 0).tolist()
            raise SeedingError(f"classes {empty} are empty")
        counts = _stratified_counts(sizes, n_seeds)
        classes: List[List[int]] = [
            rng.choice(np.flatnonzero(labels == k), counts[k], replace=False).tolist()
            for k in range(K)
        ]
        return SeedSet(classes=classes)

    for attempt in range(1, MAX_SEED_ATTEMPTS + 1):
        chosen = rng.choice(N, size=n_seeds, replace=False)
        classes = [chosen[labels[chosen] == k].tolist() for k in range(K)]
        if all(classes):
            if attempt > 1:
                logger.debug("Seed draw covered every class on attempt %d", attempt)
            return SeedSet(classes=classes)
    raise SeedingError(
        f"no draw of {n_seeds} seeds covered all {K} classes in "
        f"{MAX_SEED_ATTEMPTS} attempts"
    )
