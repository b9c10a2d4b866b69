# src/diagnostics/histograms.py
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from core.exceptions import DiagnosticsError


@dataclass(frozen=True)
class Histogram:
    edges: tuple
    counts: tuple

    @property
    def total(self):
        return sum(self.counts)

    @property
    def probabilities(self):
        total = self.total
        if total == 0:
            return np.zeros(len(self.counts))
        return np.asarray(self.counts, dtype=float) / total

    def bins(self):
        """``(low, high, probability)`` per bin"""
        return list(zip(self.edges[:-1], self.edges[1:], self.probabilities))


def uniform_edges(bins, low=0.0, high=1.0):
    if bins < 1:
        raise DiagnosticsError(f"need at least one bin, got {bins}")
    if not high > low:
        raise DiagnosticsError(f"empty histogram range [{low}, {high}]")
    return tuple(float(x) for x in np.linspace(low, high, bins + 1))


def integer_edges(low, high):
    """Unit bins centred on the integers ``low..high``"""
    return tuple(float(x) - 0.5 for x in range(int(low), int(high) + 2))


def histogram(values, edges):
    """Counts of ``values`` over ``edges``; the last bin is closed on the right"""
    counts, _ = np.histogram(np.asarray(values, dtype=float), bins=np.asarray(edges))
    return Histogram(tuple(edges), tuple(int(c) for c in counts))


def tv_distance(first, second):
    """½ Σ |p - q| over shared bins"""
    if not np.array_equal(np.asarray(first.edges), np.asarray(second.edges)):
        raise DiagnosticsError("histograms do not share bin edges")
    return 0.5 * float(np.abs(first.probabilities - second.probabilities).sum())


def max_pairwise_tv(chains):
    """
    Largest rank-averaged TV distance over all chain pairs.

    ``chains`` holds one list of per-rank histograms per chain (a bare
    Histogram counts as a single rank).
    """
    chains = [[c] if isinstance(c, Histogram) else list(c) for c in chains]
    if len(chains) < 2:
        raise DiagnosticsError("pairwise TV needs at least two chains")
    ranks = {len(c) for c in chains}
    if len(ranks) != 1:
        raise DiagnosticsError(f"chains disagree on the number of ranks: {sorted(ranks)}")
    return max(pairwise_tv(chains).values())


def pairwise_tv(chains):
    """Rank-averaged TV distance for every chain pair ``(i, j)``, ``i < j``"""
    chains = [[c] if isinstance(c, Histogram) else list(c) for c in chains]
    distances = {}
    for (i, a), (j, b) in combinations(enumerate(chains), 2):
        distances[(i, j)] = float(np.mean([tv_distance(x, y) for x, y in zip(a, b)]))
    return distances
