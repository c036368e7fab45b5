"""Region force matrices f_k(x)."""

import numpy as np
from scipy.spatial.distance import cdist

from pottsrf.core.exceptions import InvalidArgumentError, NumericDegeneracyError
from pottsrf.forces.probabilities import as_color_rows

DEFAULT_DELTA = 1e-3


def region_force_log(P: np.ndarray, delta: float = DEFAULT_DELTA) -> np.ndarray:
    """Bernoulli negative log-likelihood force -log(p + d) + log(1 - p + d)."""
    P = np.asarray(P, dtype=float)
    if delta < 0:
        raise InvalidArgumentError(f"delta must be nonnegative, got {delta}")
    if delta == 0:
        bad = np.argwhere((P <= 0) | (P >= 1))
        if bad.size:
            raise NumericDegeneracyError(
                "log force needs 0 < p < 1 when delta is 0", node=int(bad[0][0])
            )
    return -np.log(P + delta) + np.log(1.0 - P + delta)


def region_force_linear(P: np.ndarray) -> np.ndarray:
    """Linear force 1 - 2p."""
    return 1.0 - 2.0 * np.asarray(P, dtype=float)


def region_force_l2(pixels: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Squared color distance |I(x) - c_k|^2."""
    X = as_color_rows(pixels)
    C = as_color_rows(centroids)
    if X.shape[1] != C.shape[1]:
        raise InvalidArgumentError(
            f"pixels have {X.shape[1]} channels, centroids have {C.shape[1]}"
        )
    return cdist(X, C, metric="sqeuclidean")
