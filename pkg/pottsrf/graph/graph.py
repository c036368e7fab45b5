"""Weighted undirected graph stored as a canonical CSR matrix."""

import logging
from typing import Tuple

import numpy as np
from scipy import sparse

from pottsrf.core.exceptions import InvalidArgumentError, ShapeMismatchError

logger = logging.getLogger(__name__)


class Graph:
    """Symmetric, nonnegative, loop-free weighted graph.

    The adjacency is a CSR matrix with sorted column indices, so every stored
    ordered pair (i -> j) has a fixed position. Edge fields are arrays aligned
    with that layout (``weights.data``), iterated in ascending (i, j) order.
    Instances are treated as immutable after construction.
    """

    def __init__(self, weights: sparse.spmatrix):
        W = sparse.csr_matrix(weights, dtype=float, copy=True)
        if W.shape[0] != W.shape[1] or W.shape[0] < 1:
            raise InvalidArgumentError(f"weight matrix must be square, got {W.shape}")
        if not np.all(np.isfinite(W.data)):
            raise InvalidArgumentError("weights must be finite")
        if np.any(W.data < 0):
            raise InvalidArgumentError("weights must be nonnegative")
        if W.diagonal().any():
            logger.debug("Dropping %d self-loops", int(np.count_nonzero(W.diagonal())))
            W = sparse.csr_matrix(W - sparse.diags(W.diagonal()))
        W.eliminate_zeros()
        W.sort_indices()
        asym = W - W.T
        if asym.nnz and np.any(asym.data != 0):
            raise InvalidArgumentError("weight matrix must be symmetric")

        self.weights: sparse.csr_matrix = W
        self.n_nodes: int = int(W.shape[0])
        self.rows: np.ndarray = np.repeat(
            np.arange(self.n_nodes), np.diff(W.indptr)
        ).astype(np.int64)
        self.cols: np.ndarray = W.indices.astype(np.int64)
        self.transpose_index: np.ndarray = self._transpose_positions()

    def _transpose_positions(self) -> np.ndarray:
        """Position of (j -> i) for every stored (i -> j)."""
        n = np.int64(self.n_nodes)
        keys = self.rows * n + self.cols
        return np.searchsorted(keys, self.cols * n + self.rows)

    @classmethod
    def from_edges(
        cls, n_nodes: int, i: np.ndarray, j: np.ndarray, w: np.ndarray
    ) -> "Graph":
        """Build a graph from undirected edge triplets, each listed once."""
        i, j, w = np.asarray(i), np.asarray(j), np.asarray(w, dtype=float)
        W = sparse.coo_matrix(
            (np.concatenate([w, w]), (np.concatenate([i, j]), np.concatenate([j, i]))),
            shape=(n_nodes, n_nodes),
        )
        return cls(W)

    @property
    def edge_weights(self) -> np.ndarray:
        return self.weights.data

    @property
    def n_entries(self) -> int:
        """Number of stored ordered pairs (layout size of an edge field)."""
        return int(self.weights.nnz)

    @property
    def n_edges(self) -> int:
        """Number of undirected edges."""
        return self.n_entries // 2

    def degrees(self) -> np.ndarray:
        return np.asarray(self.weights.sum(axis=1)).ravel()

    def neighbors(self, node: int) -> Tuple[np.ndarray, np.ndarray]:
        """Neighbor indices (ascending) and weights of one node."""
        start, end = self.weights.indptr[node], self.weights.indptr[node + 1]
        return self.weights.indices[start:end], self.weights.data[start:end]

    def triplets(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Undirected edges as (i, j, w_ij) with i < j."""
        upper = self.rows < self.cols
        return self.rows[upper], self.cols[upper], self.edge_weights[upper]

    def check_node_field(self, u: np.ndarray, name: str = "field") -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape[0] != self.n_nodes:
            raise ShapeMismatchError(
                f"{name} has {u.shape[0]} entries, graph has {self.n_nodes} nodes"
            )
        return u

    def check_edge_field(self, q: np.ndarray, name: str = "edge field") -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if q.shape[0] != self.n_entries:
            raise ShapeMismatchError(
                f"{name} has {q.shape[0]} entries, graph stores {self.n_entries} pairs"
            )
        return q

    def __repr__(self) -> str:
        return f"Graph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"
