# src/energy/trees.py
"""
Weighted spanning-tree counts via the Matrix-Tree theorem.

tree_α(S) is the determinant of any principal (n-1)-minor of the weighted
Laplacian of the subgraph induced by S. The reduced Laplacian of a connected
graph is symmetric positive definite, so a Cholesky factorization exists and
log det = 2 Σ log(diagonal of the factor).
"""

import logging

import numpy as np

from core.exceptions import TreeCountError

logger = logging.getLogger("cyclewalk.energy")


def reduced_laplacian(graph, vertices, weighted=False, drop=0):
    """Weighted Laplacian of the induced subgraph with row/column ``drop`` removed"""
    order = sorted(vertices)
    index = {v: i for i, v in enumerate(order)}
    n = len(order)
    laplacian = np.zeros((n, n))
    for v in order:
        i = index[v]
        for w, eid in graph.neighbors(v):
            j = index.get(w)
            if j is None or j <= i:
                continue
            weight = graph.weights[eid] if weighted else 1.0
            laplacian[i, i] += weight
            laplacian[j, j] += weight
            laplacian[i, j] -= weight
            laplacian[j, i] -= weight
    keep = [i for i in range(n) if i != drop]
    return laplacian[np.ix_(keep, keep)]


def log_tree_count(graph, vertices, weighted=False, drop=0):
    """log Σ over spanning trees of the product of edge weights (unit weights unless ``weighted``)"""
    vertices = list(vertices)
    if not vertices:
        raise TreeCountError("empty vertex set")
    if len(vertices) == 1:
        return 0.0
    if not graph.is_connected(vertices):
        raise TreeCountError(f"induced subgraph on {len(vertices)} vertices is disconnected")

    minor = reduced_laplacian(graph, vertices, weighted, drop)
    try:
        factor = np.linalg.cholesky(minor)
    except np.linalg.LinAlgError as e:
        logger.warning(f"Cholesky failed on a {len(vertices)}-vertex district: {str(e)}")
        raise TreeCountError(f"non-positive pivot in reduced Laplacian ({str(e)})")

    pivots = np.diag(factor)
    if not np.all(np.isfinite(pivots)) or np.any(pivots <= 0):
        raise TreeCountError("non-positive pivot in reduced Laplacian")
    return float(2.0 * np.sum(np.log(pivots)))
