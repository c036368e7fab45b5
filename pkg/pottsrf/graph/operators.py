"""Discrete differential operators on graphs and pixel grids.

Graph operators follow the nonlocal calculus: the gradient lives on stored
ordered pairs and the divergence is its exact adjoint,
<gradient(u), q> = <u, divergence(q)>.

Grid operators use forward differences with a Neumann boundary for the
gradient; grid_divergence is its exact negative adjoint,
<grid_gradient(u), q> = -<u, grid_divergence(q)>.
A PixelVectorField is an (N, 2) array of (horizontal, vertical) components.
"""

import numpy as np

from pottsrf.core.exceptions import InvalidArgumentError, ShapeMismatchError
from pottsrf.core.models import GridGeometry
from pottsrf.graph.graph import Graph


def gradient(G: Graph, u: np.ndarray) -> np.ndarray:
    """Edge field with entry w_ij (u_j - u_i) at every stored pair (i -> j)."""
    u = G.check_node_field(u)
    return G.edge_weights * (u[G.cols] - u[G.rows])


def divergence(G: Graph, q: np.ndarray) -> np.ndarray:
    """Node field div q(x_i) = sum_j w_ij (q_ji - q_ij)."""
    q = G.check_edge_field(q)
    flux = G.edge_weights * (q[G.transpose_index] - q)
    return np.bincount(G.rows, weights=flux, minlength=G.n_nodes)


def anisotropic_tv(G: Graph, u: np.ndarray, alpha: np.ndarray) -> float:
    """sum_i alpha_i sum_j w_ij |u_j - u_i|."""
    u = G.check_node_field(u)
    alpha = _node_weights(G.n_nodes, alpha)
    jumps = np.abs(gradient(G, u))
    return float(np.sum(alpha[G.rows] * jumps))


def _node_weights(n: int, alpha) -> np.ndarray:
    alpha = np.broadcast_to(np.asarray(alpha, dtype=float), (n,))
    if np.any(alpha < 0):
        raise InvalidArgumentError("TV weights must be nonnegative")
    return alpha


def _check_grid_field(geom: GridGeometry, u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape[0] != geom.n_pixels:
        raise ShapeMismatchError(
            f"field has {u.shape[0]} entries, grid {geom.width}x{geom.height} "
            f"has {geom.n_pixels} pixels"
        )
    return u


def grid_gradient(geom: GridGeometry, u: np.ndarray) -> np.ndarray:
    """Forward differences; the last column/row gets zero (Neumann)."""
    img = _check_grid_field(geom, u).reshape(geom.shape)
    gx = np.zeros_like(img)
    gy = np.zeros_like(img)
    gx[:, :-1] = img[:, 1:] - img[:, :-1]
    gy[:-1, :] = img[1:, :] - img[:-1, :]
    return np.stack([gx.ravel(), gy.ravel()], axis=1)


def grid_divergence(geom: GridGeometry, q: np.ndarray) -> np.ndarray:
    """Backward differences with boundary truncation, -grid_gradient^T."""
    q = _check_grid_field(geom, q)
    if q.ndim != 2 or q.shape[1] != 2:
        raise ShapeMismatchError(f"pixel vector field must be (N, 2), got {q.shape}")
    px = q[:, 0].reshape(geom.shape)
    py = q[:, 1].reshape(geom.shape)
    div = np.zeros(geom.shape)

    div[:, :-1] += px[:, :-1]
    div[:, 1:] -= px[:, :-1]
    div[:-1, :] += py[:-1, :]
    div[1:, :] -= py[:-1, :]
    return div.ravel()


def isotropic_tv(geom: GridGeometry, u: np.ndarray, alpha: np.ndarray) -> float:
    """sum_x alpha(x) |grad u(x)|_2 on the pixel grid."""
    alpha = _node_weights(geom.n_pixels, alpha)
    g = grid_gradient(geom, u)
    return float(np.sum(alpha * np.hypot(g[:, 0], g[:, 1])))
