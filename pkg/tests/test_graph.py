"""Tests for graphs, builders, weights and differential operators."""

import numpy as np
import pytest
from scipy import sparse

from pottsrf.core.exceptions import (
    InvalidArgumentError,
    IsolatedNodeError,
    ShapeMismatchError,
)
from pottsrf.core.models import GridGeometry
from pottsrf.graph.affinity import normalize_affinity, with_self_loops
from pottsrf.graph.builders import build_grid_graph, build_knn_graph, knn_search
from pottsrf.graph.graph import Graph
from pottsrf.graph.operators import (
    anisotropic_tv,
    divergence,
    gradient,
    grid_divergence,
    grid_gradient,
    isotropic_tv,
)
from pottsrf.graph.weights import weight_cosine, weight_rbf, weight_zmp


def test_graph_rejects_asymmetric_weights():
    """Test that asymmetric weight matrices are rejected."""
    W = sparse.csr_matrix(np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(InvalidArgumentError, match="symmetric"):
        Graph(W)


def test_graph_rejects_negative_and_non_finite_weights():
    with pytest.raises(InvalidArgumentError):
        Graph(sparse.csr_matrix(np.array([[0.0, -1.0], [-1.0, 0.0]])))
    with pytest.raises(InvalidArgumentError):
        Graph(sparse.csr_matrix(np.array([[0.0, np.inf], [np.inf, 0.0]])))


def test_graph_drops_self_loops():
    W = np.array([[3.0, 1.0], [1.0, 2.0]])
    G = Graph(sparse.csr_matrix(W))
    assert G.weights.diagonal().sum() == 0
    assert G.n_edges == 1


def test_graph_layout_is_sorted_and_transpose_index_matches(rng, graph_factory):
    """Test canonical CSR order and the (j -> i) position lookup."""
    G = graph_factory(rng, 9)
    keys = G.rows * G.n_nodes + G.cols
    assert np.all(np.diff(keys) > 0)
    T = G.transpose_index
    assert np.array_equal(G.rows[T], G.cols)
    assert np.array_equal(G.cols[T], G.rows)
    assert np.array_equal(G.edge_weights[T], G.edge_weights)


def test_graph_triplets_list_each_edge_once():
    G = Graph.from_edges(4, [0, 1, 2], [1, 2, 3], [0.5, 1.0, 2.0])
    i, j, w = G.triplets()
    assert np.all(i < j)
    assert list(zip(i.tolist(), j.tolist(), w.tolist())) == [
        (0, 1, 0.5),
        (1, 2, 1.0),
        (2, 3, 2.0),
    ]


@pytest.mark.parametrize(
    "width,height,edges", [(1, 1, 0), (2, 2, 4), (3, 3, 12), (5, 2, 13)]
)
def test_grid_graph_edge_counts(width, height, edges):
    G = build_grid_graph(GridGeometry(width=width, height=height))
    assert G.n_nodes == width * height
    assert G.n_edges == edges
    assert np.all(G.edge_weights == 1.0)


def test_grid_geometry_rejects_zero_dimension():
    with pytest.raises(ValueError):
        GridGeometry(width=0, height=3)


def test_knn_collinear_points():
    """Test the nearest-neighbor geometry of (0), (1), (10) with s = 1."""
    points = np.array([[0.0], [1.0], [10.0]])
    G = build_knn_graph(points, 1, weight_kind="rbf", rbf_epsilon=100.0)
    i, j, _ = G.triplets()
    assert set(zip(i.tolist(), j.tolist())) == {(0, 1), (1, 2)}


def test_knn_ties_go_to_lower_index():
    points = np.array([[0.0], [-1.0], [1.0], [5.0]])
    indices, distances = knn_search(points, 2)
    assert indices[0].tolist() == [1, 2]
    assert distances[0].tolist() == [1.0, 1.0]


def test_knn_full_neighborhood_is_complete_graph(rng):
    points = rng.normal(size=(7, 2))
    G = build_knn_graph(points, 6)
    assert G.n_edges == 7 * 6 // 2


def test_knn_graph_symmetric_with_bounded_degree(rng):
    points = rng.normal(size=(200, 4))
    G = build_knn_graph(points, 5)
    W = G.weights
    assert (W != W.T).nnz == 0
    nnz_per_row = np.diff(W.indptr)
    assert nnz_per_row.min() >= 5
    assert nnz_per_row.max() <= 199


def test_knn_rejects_bad_neighbor_count(rng):
    points = rng.normal(size=(5, 2))
    with pytest.raises(InvalidArgumentError):
        knn_search(points, 5)
    with pytest.raises(InvalidArgumentError):
        knn_search(np.array([[0.0], [np.nan]]), 1)


def test_knn_cosine_and_zmp_weights_are_in_unit_interval(rng):
    points = rng.normal(size=(30, 3))
    for kind in ("cosine", "zmp"):
        G = build_knn_graph(points, 4, weight_kind=kind)
        assert np.all(G.edge_weights > 0)
        assert np.all(G.edge_weights <= 1.0)


def test_weight_kernels():
    assert weight_rbf(0.0, 0.7) == 1.0
    assert weight_rbf(np.sqrt(2 * 0.7), 0.7) == pytest.approx(np.exp(-1))
    assert weight_rbf(5.0, 1.0) < weight_rbf(4.0, 1.0)
    assert weight_zmp(0.0, 1.0, 2.0) == 1.0
    assert weight_zmp(np.sqrt(6.0), 2.0, 3.0) == pytest.approx(np.exp(-1))
    assert weight_zmp(1.3, 0.5, 2.0) == weight_zmp(1.3, 2.0, 0.5)
    x = np.array([1.0, 2.0, 3.0])
    assert weight_cosine(x, x) == pytest.approx(1.0)
    assert weight_cosine(np.array([1.0, 0.0]), np.array([0.0, 2.0])) == 0.0
    assert weight_cosine(x, -x) == pytest.approx(-1.0)


def test_weight_kernel_errors():
    with pytest.raises(InvalidArgumentError):
        weight_rbf(1.0, 0.0)
    with pytest.raises(InvalidArgumentError):
        weight_zmp(1.0, 0.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        weight_cosine(np.zeros(3), np.ones(3))


def test_normalize_affinity_examples():
    W_hat = normalize_affinity(sparse.csr_matrix([[0.0, 2.0], [2.0, 0.0]]))
    assert np.allclose(W_hat.toarray(), [[0.0, 1.0], [1.0, 0.0]])


def test_normalize_affinity_reports_isolated_nodes():
    W = sparse.csr_matrix(np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]))
    with pytest.raises(IsolatedNodeError) as excinfo:
        normalize_affinity(W)
    assert excinfo.value.indices == [2]


def test_normalized_affinity_spectral_radius(rng, graph_factory):
    G = graph_factory(rng, 10)
    W_hat = normalize_affinity(with_self_loops(G)).toarray()
    assert np.allclose(W_hat, W_hat.T)
    assert np.max(np.abs(np.linalg.eigvalsh(W_hat))) <= 1 + 1e-12


def test_two_node_gradient_and_tv(two_node_graph):
    u = np.array([0.0, 1.0])
    assert gradient(two_node_graph, u).tolist() == [1.0, -1.0]
    assert anisotropic_tv(two_node_graph, u, 1.0) == 2.0
    assert anisotropic_tv(two_node_graph, np.ones(2), 1.0) == 0.0


def test_divergence_of_symmetric_flow_vanishes(rng, graph_factory):
    G = graph_factory(rng, 8)
    q = rng.normal(size=G.n_entries)
    q_sym = q + q[G.transpose_index]
    assert np.allclose(divergence(G, q_sym), 0.0)
    assert np.all(divergence(G, np.zeros(G.n_entries)) == 0.0)


def test_divergence_matches_double_sum(rng, graph_factory):
    G = graph_factory(rng, 6)
    q = rng.normal(size=G.n_entries)
    W = G.weights.toarray()
    Q = np.zeros((6, 6))
    Q[G.rows, G.cols] = q
    expected = np.array(
        [sum(W[i, j] * (Q[j, i] - Q[i, j]) for j in range(6)) for i in range(6)]
    )
    assert np.allclose(divergence(G, q), expected, atol=1e-12)
    assert abs(divergence(G, q).sum()) <= 1e-12 * (1 + np.abs(q).sum())


def test_graph_adjointness_on_random_instances(rng, graph_factory):
    """Test <grad u, q> = <u, div q> on 100 random graphs."""
    for _ in range(100):
        n = int(rng.integers(2, 15))
        G = graph_factory(rng, n)
        u = rng.normal(size=n)
        q = rng.normal(size=G.n_entries)
        lhs = np.dot(gradient(G, u), q)
        rhs = np.dot(u, divergence(G, q))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_anisotropic_tv_equals_plug_in_dual(rng, graph_factory):
    G = graph_factory(rng, 7)
    u = rng.normal(size=7)
    alpha = rng.uniform(0.1, 2.0, size=7)
    q_star = alpha[G.rows] * np.sign(u[G.cols] - u[G.rows])
    plug_in = np.dot(u, divergence(G, q_star))
    assert anisotropic_tv(G, u, alpha) == pytest.approx(plug_in)


def test_anisotropic_tv_zero_for_componentwise_constant(two_cliques):
    u = np.array([1.0] * 4 + [-3.0] * 4)
    assert anisotropic_tv(two_cliques, u, 1.0) == 0.0


def test_operators_check_sizes(two_node_graph, grid_geom):
    with pytest.raises(ShapeMismatchError):
        gradient(two_node_graph, np.zeros(3))
    with pytest.raises(ShapeMismatchError):
        divergence(two_node_graph, np.zeros(5))
    with pytest.raises(ShapeMismatchError):
        grid_gradient(grid_geom, np.zeros(10))


def test_grid_gradient_uses_neumann_boundary():
    geom = GridGeometry(width=2, height=1)
    g = grid_gradient(geom, np.array([0.0, 1.0]))
    assert g[:, 0].tolist() == [1.0, 0.0]
    assert np.all(grid_gradient(GridGeometry(width=3, height=4), np.full(12, 2.5)) == 0)


def test_grid_adjointness(rng, grid_geom):
    """Test <grad u, q> = -<u, div q> on 100 random 8 x 6 pairs."""
    for _ in range(100):
        u = rng.normal(size=grid_geom.n_pixels)
        q = rng.normal(size=(grid_geom.n_pixels, 2))
        lhs = np.sum(grid_gradient(grid_geom, u) * q)
        rhs = -np.dot(u, grid_divergence(grid_geom, q))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_isotropic_tv_of_vertical_edge():
    geom = GridGeometry(width=4, height=3)
    u = np.tile([0.0, 0.0, 1.0, 1.0], 3)
    assert isotropic_tv(geom, u, 1.0) == pytest.approx(3.0)
