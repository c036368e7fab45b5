"""Grid and s-nearest-neighbor graph construction."""

import logging
from typing import Tuple

import numpy as np
from scipy import sparse
from scipy.spatial.distance import cdist

from pottsrf.core.config import WeightKind
from pottsrf.core.exceptions import InvalidArgumentError
from pottsrf.core.models import GridGeometry
from pottsrf.graph.graph import Graph
from pottsrf.graph.weights import weight_cosine, weight_rbf, weight_zmp

logger = logging.getLogger(__name__)


def build_grid_graph(geom: GridGeometry) -> Graph:
    """4-connected pixel graph with unit weights and no wraparound."""
    width, height = geom.width, geom.height
    if width < 1 or height < 1:
        raise InvalidArgumentError(
            f"grid dimensions must be positive: {width}x{height}"
        )
    index = np.arange(width * height).reshape(height, width)
    i = np.concatenate([index[:, :-1].ravel(), index[:-1, :].ravel()])
    j = np.concatenate([index[:, 1:].ravel(), index[1:, :].ravel()])
    return Graph.from_edges(width * height, i, j, np.ones(i.shape[0]))


def knn_search(
    points: np.ndarray, s: int, block_size: int = 512
) -> Tuple[np.ndarray, np.ndarray]:
    """Exact brute-force s-nearest neighbors under the l2 metric.

    Returns (indices, distances), each N x s, ordered by distance with ties
    broken by the lower point index. A point is never its own neighbor, but
    duplicates of it are (at distance 0).
    """
    X = np.asarray(points, dtype=float)
    if X.ndim != 2:
        raise InvalidArgumentError("points must be an N x D array")
    n = X.shape[0]
    if not np.all(np.isfinite(X)):
        raise InvalidArgumentError("point coordinates must be finite")
    if s < 1 or s >= n:
        raise InvalidArgumentError(f"s must satisfy 1 <= s < N={n}, got s={s}")

    indices = np.empty((n, s), dtype=np.int64)
    distances = np.empty((n, s), dtype=float)
    for start in range(0, n, block_size):
        stop = min(start + block_size, n)
        D = cdist(X[start:stop], X, metric="sqeuclidean")
        D[np.arange(stop - start), np.arange(start, stop)] = np.inf
        order = np.argsort(D, axis=1, kind="stable")[:, :s]
        indices[start:stop] = order
        distances[start:stop] = np.sqrt(np.take_along_axis(D, order, axis=1))
    return indices, distances


def build_knn_graph(
    points: np.ndarray,
    s: int,
    weight_kind: WeightKind = "zmp",
    rbf_epsilon: float = 1.0,
) -> Graph:
    """s-NN graph with kernel weights, symmetrized by W <- (W + W^T) / 2."""
    X = np.asarray(points, dtype=float)
    indices, distances = knn_search(X, s)
    n = X.shape[0]
    rows = np.repeat(np.arange(n), s)
    cols = indices.ravel()
    d = distances.ravel()

    if weight_kind == "rbf":
        w = weight_rbf(d, rbf_epsilon)
    elif weight_kind == "zmp":
        sigma = distances[:, -1]
        # Coincident s-th neighbors would give a zero scale.
        floor = np.finfo(float).eps * (1.0 + float(distances.max()))
        sigma = np.maximum(sigma, floor)
        w = weight_zmp(d, sigma[rows], sigma[cols])
    elif weight_kind == "cosine":
        # affinities stay nonnegative
        w = np.maximum(weight_cosine(X[rows], X[cols]), 0.0)
    else:
        raise InvalidArgumentError(f"unknown weight kind {weight_kind!r}")

    W = sparse.csr_matrix((w, (rows, cols)), shape=(n, n))
    W = (W + W.T) / 2.0
    graph = Graph(W)
    logger.info(
        "Built %s s-NN graph: %d nodes, %d edges (s=%d)",
        weight_kind,
        graph.n_nodes,
        graph.n_edges,
        s,
    )
    return graph
