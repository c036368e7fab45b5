"""Edge weight kernels."""

from typing import Union

import numpy as np

from pottsrf.core.exceptions import InvalidArgumentError

ArrayLike = Union[float, np.ndarray]


def weight_rbf(d: ArrayLike, epsilon: float) -> ArrayLike:
    """Radial basis function exp(-d^2 / (2 epsilon))."""
    if epsilon <= 0:
        raise InvalidArgumentError(f"RBF width must be positive, got {epsilon}")
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise InvalidArgumentError("distances must be nonnegative")
    return np.exp(-(d**2) / (2.0 * epsilon))


def weight_zmp(d: ArrayLike, sigma_i: ArrayLike, sigma_j: ArrayLike) -> ArrayLike:
    """Self-tuning weight exp(-d^2 / (sigma_i sigma_j))."""
    sigma_i = np.asarray(sigma_i, dtype=float)
    sigma_j = np.asarray(sigma_j, dtype=float)
    if np.any(sigma_i <= 0) or np.any(sigma_j <= 0):
        raise InvalidArgumentError("local scales must be positive")
    d = np.asarray(d, dtype=float)
    return np.exp(-(d**2) / (sigma_i * sigma_j))


def weight_cosine(x_i: np.ndarray, x_j: np.ndarray) -> ArrayLike:
    """Cosine similarity along the last axis."""
    x_i = np.asarray(x_i, dtype=float)
    x_j = np.asarray(x_j, dtype=float)
    n_i = np.linalg.norm(x_i, axis=-1)
    n_j = np.linalg.norm(x_j, axis=-1)
    if np.any(n_i == 0) or np.any(n_j == 0):
        raise InvalidArgumentError("cosine similarity is undefined for zero vectors")
    cos = np.sum(x_i * x_j, axis=-1) / (n_i * n_j)
    return np.clip(cos, -1.0, 1.0)
