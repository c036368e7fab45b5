"""Projections onto the simplex and onto dual balls."""

from typing import Optional

import numpy as np

from pottsrf.core.config import TVFlavor
from pottsrf.core.exceptions import InvalidArgumentError


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of a K-vector onto {x >= 0, sum x = 1}."""
    return project_simplex_rows(np.asarray(v, dtype=float)[None, :])[0]


def project_simplex_rows(V: np.ndarray) -> np.ndarray:
    """Row-wise simplex projection by sorting and thresholding."""
    V = np.asarray(V, dtype=float)
    n, K = V.shape
    U = -np.sort(-V, axis=1)
    css = np.cumsum(U, axis=1) - 1.0
    ks = np.arange(1, K + 1)
    active = U - css / ks > 0
    # number of positive entries = last index where the condition holds
    rho = K - np.argmax(active[:, ::-1], axis=1)
    theta = css[np.arange(n), rho - 1] / rho
    return np.maximum(V - theta[:, None], 0.0)


def project_dual_ball(
    q: np.ndarray,
    alpha: np.ndarray,
    flavor: TVFlavor,
    rows: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Project a dual flow onto |q| <= alpha.

    isotropic-grid: q is (N, 2) and each pixel vector is scaled radially.
    anisotropic-graph: q is an edge field and each entry (i -> j) is clamped to
    [-alpha_i, alpha_i]; ``rows`` gives i for every entry.
    """
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha < 0):
        raise InvalidArgumentError("ball radius alpha must be nonnegative")
    q = np.asarray(q, dtype=float)

    if flavor == "isotropic-grid":
        radius = np.broadcast_to(alpha, (q.shape[0],))
        norm = np.hypot(q[:, 0], q[:, 1])
        scale = np.ones_like(norm)
        outside = norm > radius
        scale[outside] = radius[outside] / norm[outside]
        return q * scale[:, None]

    if flavor == "anisotropic-graph":
        if rows is not None and alpha.ndim == 1:
            bound = alpha[rows]
        else:
            bound = np.broadcast_to(alpha, q.shape)
        return np.clip(q, -bound, bound)

    raise InvalidArgumentError(f"unknown TV flavor {flavor!r}")
