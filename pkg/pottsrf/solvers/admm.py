"""ADMM on the augmented Lagrangian of the continuous max-flow dual."""

from typing import Any, Dict

import numpy as np

from pottsrf.core.exceptions import DivergenceError
from pottsrf.solvers.backends import TVBackend
from pottsrf.solvers.base import PottsSolver, argmin_init


def source_flow_update(
    div: np.ndarray, h: np.ndarray, phi: np.ndarray, c: float
) -> np.ndarray:
    """Closed-form maximizer of the augmented Lagrangian in lambda."""
    K = phi.shape[1]
    return np.mean(div + h - phi / c, axis=1) + 1.0 / (K * c)


def augmented_lagrangian(
    lam: np.ndarray, h: np.ndarray, div: np.ndarray, phi: np.ndarray, c: float
) -> float:
    """sum lambda + sum_k <phi_k, r_k> - c/2 sum_k |r_k|^2.

    r_k = div q_k - lambda + h_k.
    """
    residual = div - lam[:, None] + h
    return float(
        np.sum(lam) + np.sum(phi * residual) - 0.5 * c * np.sum(residual**2)
    )


class AdmmSolver(PottsSolver):
    """Alternating maximization over (lambda, h, q) and a multiplier step in phi.

    The q-subproblem is not solved exactly: one projected gradient step of
    size beta_l is taken per iteration. The multipliers phi may leave the
    simplex while iterating and are projected row-wise on extraction.
    """

    algorithm = "admm"

    def _initialize(
        self, F: np.ndarray, alpha: np.ndarray, backend: TVBackend
    ) -> Dict[str, Any]:
        K = F.shape[1]
        q = backend.zero_flow(K)
        return {
            "phi": argmin_init(F, uniform=self.config.uniform_init),
            "q": q,
            "div": np.zeros(F.shape),
            "h": np.minimum(F, 0.0),
            "lam": np.zeros(F.shape[0]),
        }

    def _iterate(
        self,
        state: Dict[str, Any],
        F: np.ndarray,
        alpha: np.ndarray,
        backend: TVBackend,
        iteration: int,
    ) -> None:
        beta, _ = self.config.step_sizes(iteration)
        c = self.config.c
        phi, q, div, h = state["phi"], state["q"], state["div"], state["h"]
        K = F.shape[1]

        lam = source_flow_update(div, h, phi, c)
        h = np.minimum(phi / c + lam[:, None] - div, F)

        new_q = np.empty_like(q)
        for k in range(K):
            residual = div[:, k] - lam + h[:, k] - phi[:, k] / c
            new_q[k] = backend.project(q[k] + beta * backend.grad(residual), alpha)
        new_div = np.stack([backend.div(new_q[k]) for k in range(K)], axis=1)

        new_phi = phi - c * (h + new_div - lam[:, None])
        if not (np.all(np.isfinite(new_phi)) and np.all(np.isfinite(lam))):
            raise DivergenceError("non-finite iterate", iteration=iteration)

        state.update(phi=new_phi, q=new_q, div=new_div, h=h, lam=lam)
