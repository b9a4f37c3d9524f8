"""kNN similarity graphs and Laplacians in the fuzzy feature space."""

from dataclasses import dataclass

import numpy as np


@dataclass
class GraphLaplacian:
    """Symmetric similarity matrix with its degree vector and Laplacian."""

    similarity: np.ndarray
    degree: np.ndarray
    laplacian: np.ndarray


def _pairwise_sq_dists(x):
    sq = (x * x).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(d2, 0.0, out=d2)
    return d2


def knn_similarity(x, n_neighbors=5, bandwidth="auto"):
    """Gaussian-kernel similarity restricted to each row's k nearest
    neighbors, then symmetrized as (S + S^T)/2 with a zero diagonal.

    bandwidth="auto" sets the kernel scale to the median of the nonzero
    selected neighbor distances, which keeps the weights away from the
    degenerate all-0 / all-1 regimes whatever the data scale. Distance
    ties resolve to the lower index.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if not 1 <= n_neighbors < n:
        raise ValueError(f"n_neighbors must be in [1, {n - 1}]")
    d2 = _pairwise_sq_dists(x)
    np.fill_diagonal(d2, np.inf)
    # Stable sort: equal distances keep ascending index order.
    order = np.argsort(d2, axis=1, kind="stable")[:, :n_neighbors]
    rows = np.repeat(np.arange(n), n_neighbors)
    cols = order.ravel()
    neigh_d2 = d2[rows, cols]

    if bandwidth == "auto":
        dists = np.sqrt(neigh_d2)
        nonzero = dists[dists > 0]
        sigma = float(np.median(nonzero)) if nonzero.size else 1.0
    else:
        sigma = float(bandwidth)
        if sigma <= 0:
            raise ValueError("bandwidth must be positive")

    s = np.zeros((n, n))
    s[rows, cols] = np.exp(-neigh_d2 / (2.0 * sigma * sigma))
    s = 0.5 * (s + s.T)
    np.fill_diagonal(s, 0.0)
    return s


def laplacian(similarity):
    """Unnormalized graph Laplacian L = D - S of a symmetric similarity."""
    s = np.asarray(similarity, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("similarity must be square")
    if np.max(np.abs(s - s.T)) > 1e-10:
        raise ValueError("similarity must be symmetric")
    if np.any(s < 0):
        raise ValueError("similarity must be non-negative")
    degree = s.sum(axis=1)
    lap = np.diag(degree) - s
    return GraphLaplacian(similarity=s, degree=degree, laplacian=lap)


def build_graph(x, n_neighbors=5, bandwidth="auto"):
    """Similarity plus Laplacian in one call."""
    return laplacian(knn_similarity(x, n_neighbors, bandwidth))
