# src/diagnostics/marginals.py
import numpy as np

from core.exceptions import DiagnosticsError
from diagnostics.histograms import histogram


def order_statistics(samples):
    """Per-record ascending sort as a ``records × d`` array"""
    rows = [list(s) for s in samples]
    if not rows:
        raise DiagnosticsError("no samples")
    sizes = {len(row) for row in rows}
    if len(sizes) != 1:
        raise DiagnosticsError(f"records disagree on the number of districts: {sorted(sizes)}")
    if any(value is None for row in rows for value in row):
        raise DiagnosticsError("records contain undefined district values")
    return np.sort(np.asarray(rows, dtype=float), axis=1)


def ranked_marginals(samples, edges):
    """One histogram per rank: histogram ``k`` collects the k-th smallest value of each record"""
    ordered = order_statistics(samples)
    return [histogram(ordered[:, k], edges) for k in range(ordered.shape[1])]
