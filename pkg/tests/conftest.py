"""Test configuration for pottsrf."""

import numpy as np
import pytest
from scipy import sparse

from pottsrf.core.config import RunConfig, SolverConfig
from pottsrf.core.models import Dataset, GridGeometry
from pottsrf.graph.graph import Graph


def random_graph(
    rng: np.random.Generator,
    n_nodes: int,
    density: float = 0.5,
    low: float = 0.1,
    high: float = 1.0,
) -> Graph:
    """Random symmetric graph; every node keeps at least one edge to its successor."""
    i, j = np.triu_indices(n_nodes, k=1)
    keep = (rng.random(i.size) < density) | (j == i + 1)
    w = rng.uniform(low, high, size=int(keep.sum()))
    return Graph.from_edges(n_nodes, i[keep], j[keep], w)


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(12345)


@pytest.fixture
def graph_factory():
    """Build random symmetric graphs."""
    return random_graph


@pytest.fixture
def two_node_graph():
    """Two nodes joined by a unit edge."""
    return Graph(sparse.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]])))


@pytest.fixture
def two_cliques():
    """Two disconnected 4-cliques, nodes 0-3 and 4-7."""
    W = np.zeros((8, 8))
    W[:4, :4] = 1.0
    W[4:, 4:] = 1.0
    np.fill_diagonal(W, 0.0)
    return Graph(sparse.csr_matrix(W))


@pytest.fixture
def grid_geom():
    """8 x 6 pixel grid."""
    return GridGeometry(width=8, height=6)


@pytest.fixture
def pdhg_config():
    """PDHG settings for small problems."""
    return SolverConfig(
        algorithm="pdhg", epsilon=1e-8, max_iter=5000, log_level="WARNING"
    )


@pytest.fixture
def admm_config():
    """ADMM settings for small problems."""
    return SolverConfig(
        algorithm="admm", epsilon=1e-8, max_iter=5000, c=0.1, log_level="WARNING"
    )


@pytest.fixture
def blobs_dataset():
    """Two well separated Gaussian blobs in R^3, 40 points each."""
    rng = np.random.default_rng(7)
    a = rng.normal(0.0, 0.2, size=(40, 3))
    b = rng.normal(5.0, 0.2, size=(40, 3))
    points = np.vstack([a, b])
    labels = np.repeat([0, 1], 40)
    return Dataset(points=points, labels=labels, n_classes=2, name="blobs")


@pytest.fixture
def cluster_config():
    """Run configuration for quick clustering on small datasets."""
    return RunConfig(
        alpha=0.5,
        s=5,
        n_seeds=4,
        n_trials=3,
        epsilon=1e-3,
        max_iter=2500,
        log_level="WARNING",
    )
