"""Class membership probabilities for graphs and images."""

import logging

import numpy as np
from scipy import sparse
from scipy.spatial.distance import cdist
from scipy.special import softmax

from pottsrf.core.exceptions import InvalidArgumentError, NumericDegeneracyError
from pottsrf.core.models import SeedSet

logger = logging.getLogger(__name__)


def diffusion_probabilities(
    W_hat: sparse.spmatrix, seeds: SeedSet, m: int = 2
) -> np.ndarray:
    """Seed-averaged normalized m-step affinities, one column per class.

    r_ij = (w^(m)_ij)^2 / (w^(m)_ii w^(m)_jj) is averaged over each seed class
    and the averages are normalized across classes. Rows without any affinity
    to a seed get 1/K. Only the seed columns of W_hat^m are formed.
    """
    if m not in (1, 2):
        raise InvalidArgumentError(f"diffusion power m must be 1 or 2, got {m}")
    W_hat = sparse.csr_matrix(W_hat)
    n = W_hat.shape[0]
    K = seeds.n_classes
    for k, members in enumerate(seeds.classes):
        if not members:
            raise InvalidArgumentError(f"seed class {k} is empty")
        if max(members) >= n:
            raise InvalidArgumentError(f"seed index {max(members)} out of range")

    if m == 1:
        diag = W_hat.diagonal()
    else:
        # W_hat is symmetric, so (W_hat^2)_ii is the squared norm of row i.
        diag = np.asarray(W_hat.multiply(W_hat).sum(axis=1)).ravel()
    bad = np.flatnonzero(diag <= 0)
    if bad.size:
        raise NumericDegeneracyError(
            f"zero diagonal in the {m}-step affinity", node=int(bad[0])
        )

    seed_index = np.concatenate([np.asarray(c, dtype=int) for c in seeds.classes])
    E = sparse.csr_matrix(
        (np.ones(seed_index.size), (seed_index, np.arange(seed_index.size))),
        shape=(n, seed_index.size),
    )
    columns = E
    for _ in range(m):
        columns = W_hat @ columns
    C = columns.toarray() if sparse.issparse(columns) else np.asarray(columns)

    r = C**2 / (diag[:, None] * diag[seed_index][None, :])

    scores = np.zeros((n, K))
    offset = 0
    for k, members in enumerate(seeds.classes):
        size = len(members)
        scores[:, k] = r[:, offset : offset + size].sum(axis=1) / size
        offset += size

    total = scores.sum(axis=1)
    P = np.full((n, K), 1.0 / K)
    covered = total > 0
    P[covered] = scores[covered] / total[covered, None]
    logger.debug("Nodes without seed affinity: %d", int(np.sum(~covered)))
    return P


def image_probabilities(
    pixels: np.ndarray,
    centroids: np.ndarray,
    sigma: float = 1.0,
    squared: bool = False,
) -> np.ndarray:
    """Softmax of -|I(x) - c_k| / (2 sigma^2) over the centroids.

    By default the distance is not squared. ``squared=True`` uses the Gaussian
    density exponent instead.
    """
    if sigma <= 0:
        raise InvalidArgumentError(f"sigma must be positive, got {sigma}")
    X = as_color_rows(pixels)
    C = as_color_rows(centroids)
    if X.shape[1] != C.shape[1]:
        raise InvalidArgumentError(
            f"pixels have {X.shape[1]} channels, centroids have {C.shape[1]}"
        )
    dist = cdist(X, C, metric="sqeuclidean" if squared else "euclidean")
    return softmax(-dist / (2.0 * sigma**2), axis=1)


def as_color_rows(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    return values
