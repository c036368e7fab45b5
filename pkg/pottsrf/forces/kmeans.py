"""k-means color centroids for image region forces."""

import logging

import numpy as np
from sklearn.cluster import KMeans

from pottsrf.core.exceptions import InvalidArgumentError
from pottsrf.forces.probabilities import as_color_rows

logger = logging.getLogger(__name__)

MAX_ITER = 100
TOLERANCE = 1e-6


def kmeans_centroids(
    pixels: np.ndarray,
    k: int,
    rng_seed: int = 0,
    max_iter: int = MAX_ITER,
    tol: float = TOLERANCE,
) -> np.ndarray:
    """K x C centroid matrix, deterministic for a given rng_seed.

    A single k-means++ initialization followed by Lloyd iterations. Empty
    clusters are relocated by scikit-learn.
    """
    X = as_color_rows(pixels)
    if k < 1:
        raise InvalidArgumentError(f"k must be positive, got {k}")
    if rng_seed < 0:
        raise InvalidArgumentError(f"rng_seed must be nonnegative, got {rng_seed}")
    n_distinct = np.unique(X, axis=0).shape[0]
    if n_distinct < k:
        raise InvalidArgumentError(
            f"need at least {k} distinct points, got {n_distinct}"
        )

    model = KMeans(
        n_clusters=k,
        init="k-means++",
        n_init=1,
        max_iter=max_iter,
        tol=tol,
        random_state=rng_seed,
    ).fit(X)
    logger.debug(
        "k-means stopped after %d iterations, inertia %.6g",
        model.n_iter_,
        model.inertia_,
    )
    return np.asarray(model.cluster_centers_, dtype=float)
