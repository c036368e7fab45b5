"""Normalized affinity matrices."""

import numpy as np
from scipy import sparse

from pottsrf.core.exceptions import InvalidArgumentError, IsolatedNodeError
from pottsrf.graph.graph import Graph


def with_self_loops(G: Graph, weight: float = 1.0) -> sparse.csr_matrix:
    """Weight matrix of G with w_ii set to ``weight`` on every node."""
    W = G.weights + weight * sparse.identity(G.n_nodes, format="csr")
    W = sparse.csr_matrix(W)
    W.sort_indices()
    return W


def normalize_affinity(W: sparse.spmatrix) -> sparse.csr_matrix:
    """D^{-1/2} W D^{-1/2} with d_ii the l1 norm of row i."""
    W = sparse.csr_matrix(W, dtype=float)
    if W.shape[0] != W.shape[1]:
        raise InvalidArgumentError(f"affinity must be square, got {W.shape}")
    if W.nnz and np.any(W.data < 0):
        raise InvalidArgumentError("affinity must be nonnegative")
    d = np.asarray(abs(W).sum(axis=1)).ravel()
    isolated = np.flatnonzero(d <= 0)
    if isolated.size:
        raise IsolatedNodeError(isolated)
    scale = sparse.diags(1.0 / np.sqrt(d))
    W_hat = sparse.csr_matrix(scale @ W @ scale)
    W_hat.sort_indices()
    return W_hat
