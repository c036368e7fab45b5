"""Primal-dual hybrid gradient solver for the first dual formulation."""

from typing import Any, Dict

import numpy as np

from pottsrf.core.exceptions import DivergenceError
from pottsrf.solvers.backends import TVBackend
from pottsrf.solvers.base import PottsSolver, argmin_init
from pottsrf.solvers.projections import project_simplex_rows


class PdhgSolver(PottsSolver):
    """PDHG with extrapolation phi_bar = theta phi^l + (1 - theta) phi^{l+1}.

    Each iteration:
      1. q_k <- Pi_ball(q_k - beta_l grad phi_bar_k)
      2. phi <- Pi_S(phi - gamma_l (div q_k + f_k))
      3. phi_bar <- theta phi_old + (1 - theta) phi

    ``literal_ordering`` takes the gradient of phi instead of phi_bar in step 1
    and the divergence of the previous q in step 2.
    """

    algorithm = "pdhg"

    def _initialize(
        self, F: np.ndarray, alpha: np.ndarray, backend: TVBackend
    ) -> Dict[str, Any]:
        phi = argmin_init(F, uniform=self.config.uniform_init)
        return {
            "phi": phi,
            "phi_bar": phi.copy(),
            "q": backend.zero_flow(F.shape[1]),
        }

    def _iterate(
        self,
        state: Dict[str, Any],
        F: np.ndarray,
        alpha: np.ndarray,
        backend: TVBackend,
        iteration: int,
    ) -> None:
        beta, gamma = self.config.step_sizes(iteration)
        theta = self.config.theta
        literal = self.config.literal_ordering
        phi, phi_bar, q = state["phi"], state["phi_bar"], state["q"]
        K = F.shape[1]

        lead = phi if literal else phi_bar
        previous_div = None
        if literal:
            previous_div = np.stack([backend.div(q[k]) for k in range(K)], axis=1)

        new_q = np.empty_like(q)
        for k in range(K):
            new_q[k] = backend.project(q[k] - beta * backend.grad(lead[:, k]), alpha)

        div = (
            previous_div
            if literal
            else np.stack([backend.div(new_q[k]) for k in range(K)], axis=1)
        )
        new_phi = project_simplex_rows(phi - gamma * (div + F))
        if not np.all(np.isfinite(new_phi)):
            raise DivergenceError("non-finite primal iterate", iteration=iteration)

        state["phi_bar"] = theta * phi + (1.0 - theta) * new_phi
        state["phi"] = new_phi
        state["q"] = new_q
