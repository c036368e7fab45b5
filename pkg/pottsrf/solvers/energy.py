"""Primal and dual energies of the relaxed Potts problem."""

import numpy as np

from pottsrf.core.exceptions import ShapeMismatchError
from pottsrf.solvers.backends import TVBackend


def primal_energy(
    F: np.ndarray, phi: np.ndarray, alpha: np.ndarray, backend: TVBackend
) -> float:
    """sum_k <f_k, phi_k> + TV_alpha(phi_k)."""
    F = backend.check_forces(F)
    phi = np.asarray(phi, dtype=float)
    if phi.shape != F.shape:
        raise ShapeMismatchError(f"phi is {phi.shape}, forces are {F.shape}")
    alpha = backend.check_alpha(alpha)
    region = float(np.sum(F * phi))
    boundary = sum(backend.tv(phi[:, k], alpha) for k in range(F.shape[1]))
    return region + boundary


def dual_energy(F: np.ndarray, Q: np.ndarray, backend: TVBackend) -> float:
    """sum_x min_k (f_k(x) + div q_k(x))."""
    F = backend.check_forces(F)
    if len(Q) != F.shape[1]:
        raise ShapeMismatchError(f"{len(Q)} dual fields for {F.shape[1]} classes")
    div = np.stack([backend.div(Q[k]) for k in range(F.shape[1])], axis=1)
    return float(np.sum(np.min(F + div, axis=1)))


def duality_gap(E_P: float, E_D: float) -> float:
    """|E_P - E_D| / |E_P|, or the absolute difference when E_P is zero."""
    diff = abs(E_P - E_D)
    if E_P == 0:
        return diff
    return diff / abs(E_P)
