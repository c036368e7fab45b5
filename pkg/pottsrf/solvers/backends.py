"""TV backends: the spatial operators a Potts solver runs on."""

from abc import ABC, abstractmethod

import numpy as np

from pottsrf.core.config import TVFlavor
from pottsrf.core.exceptions import InvalidArgumentError, ShapeMismatchError
from pottsrf.core.models import GridGeometry
from pottsrf.graph.graph import Graph
from pottsrf.graph.operators import (
    anisotropic_tv,
    divergence,
    gradient,
    grid_divergence,
    grid_gradient,
    isotropic_tv,
)
from pottsrf.solvers.projections import project_dual_ball


class TVBackend(ABC):
    """Gradient/divergence pair with div = -grad^T.

    With this sign convention the saddle problem reads
    min_phi max_q <f, phi> + <phi, div q>, and both solver algorithms apply
    their update formulas unchanged on every backend.
    """

    flavor: TVFlavor
    n_nodes: int

    @abstractmethod
    def grad(self, u: np.ndarray) -> np.ndarray:
        """Dual field of one class."""
        pass

    @abstractmethod
    def div(self, q: np.ndarray) -> np.ndarray:
        """Node field of one class."""
        pass

    @abstractmethod
    def project(self, q: np.ndarray, alpha: np.ndarray) -> np.ndarray:
        """Project one class's dual field onto its alpha ball."""
        pass

    @abstractmethod
    def tv(self, u: np.ndarray, alpha: np.ndarray) -> float:
        """alpha-weighted total variation of one class's field."""
        pass

    @abstractmethod
    def zero_flow(self, n_classes: int) -> np.ndarray:
        """All-zero dual flow for ``n_classes`` classes."""
        pass

    def check_alpha(self, alpha) -> np.ndarray:
        alpha = np.array(
            np.broadcast_to(np.asarray(alpha, dtype=float), (self.n_nodes,))
        )
        if np.any(alpha < 0) or not np.all(np.isfinite(alpha)):
            raise InvalidArgumentError("TV weights must be finite and nonnegative")
        return alpha

    def check_forces(self, F: np.ndarray) -> np.ndarray:
        F = np.asarray(F, dtype=float)
        if F.ndim != 2 or F.shape[0] != self.n_nodes:
            raise ShapeMismatchError(
                f"region forces must be ({self.n_nodes}, K), got {F.shape}"
            )
        return F


class GridBackend(TVBackend):
    """Isotropic TV on a pixel grid with forward differences."""

    flavor: TVFlavor = "isotropic-grid"

    def __init__(self, geom: GridGeometry):
        self.geom = geom
        self.n_nodes = geom.n_pixels

    def grad(self, u: np.ndarray) -> np.ndarray:
        return grid_gradient(self.geom, u)

    def div(self, q: np.ndarray) -> np.ndarray:
        return grid_divergence(self.geom, q)

    def project(self, q: np.ndarray, alpha: np.ndarray) -> np.ndarray:
        return project_dual_ball(q, alpha, self.flavor)

    def tv(self, u: np.ndarray, alpha: np.ndarray) -> float:
        return isotropic_tv(self.geom, u, alpha)

    def zero_flow(self, n_classes: int) -> np.ndarray:
        return np.zeros((n_classes, self.n_nodes, 2))


class GraphBackend(TVBackend):
    """Anisotropic TV on a weighted graph.

    The graph divergence is the positive adjoint of the gradient, so the
    solver-facing divergence is its negative.
    """

    flavor: TVFlavor = "anisotropic-graph"

    def __init__(self, graph: Graph):
        self.graph = graph
        self.n_nodes = graph.n_nodes

    def grad(self, u: np.ndarray) -> np.ndarray:
        return gradient(self.graph, u)

    def div(self, q: np.ndarray) -> np.ndarray:
        return -divergence(self.graph, q)

    def project(self, q: np.ndarray, alpha: np.ndarray) -> np.ndarray:
        return project_dual_ball(q, alpha, self.flavor, rows=self.graph.rows)

    def tv(self, u: np.ndarray, alpha: np.ndarray) -> float:
        return anisotropic_tv(self.graph, u, alpha)

    def zero_flow(self, n_classes: int) -> np.ndarray:
        return np.zeros((n_classes, self.graph.n_entries))
