# src/diagnostics/convergence.py
"""
Mixing statistics on scalar traces.

``ess_steps`` reports steps per effectively independent sample,
1 + 2 Σ ρ_i summed up to (not including) the first lag whose autocorrelation
is non-positive.
"""

import logging
from typing import NamedTuple

import numpy as np

from core.exceptions import DiagnosticsError

logger = logging.getLogger("cyclewalk.diagnostics")

DEGENERATE_RHAT = 1e12
MIN_ESS_LENGTH = 10


def autocorrelation(trace, max_lag=None):
    """Sample autocorrelation ρ_0..ρ_max_lag via FFT (biased normalisation)"""
    x = np.asarray(trace, dtype=float)
    n = len(x)
    if n < 2:
        raise DiagnosticsError("autocorrelation needs at least two values")
    max_lag = n - 1 if max_lag is None else min(max_lag, n - 1)
    centred = x - x.mean()
    size = 1 << (2 * n - 1).bit_length()
    spectrum = np.fft.rfft(centred, size)
    acov = np.fft.irfft(spectrum * np.conjugate(spectrum), size)[: max_lag + 1]
    if acov[0] <= 0:
        return np.ones(max_lag + 1)
    return acov / acov[0]


def ess_steps(trace):
    """Chain steps per effectively independent sample; 1 for constant traces"""
    x = np.asarray(trace, dtype=float)
    if len(x) < MIN_ESS_LENGTH:
        raise DiagnosticsError(f"ESS needs at least {MIN_ESS_LENGTH} values, got {len(x)}")
    if np.all(x == x[0]):
        return 1.0
    rho = autocorrelation(x)
    total = 0.0
    for value in rho[1:]:
        if value <= 0:
            break
        total += value
    return 1.0 + 2.0 * total


def ess_per_two_tree_step(ess, p_two_tree):
    """ESS re-expressed in expected 2-tree steps"""
    return ess * p_two_tree


class RHat(NamedTuple):
    value: float
    degenerate: bool = False


def gelman_rubin(traces):
    """
    Potential scale reduction R̂ from between- and within-chain variance.

    Zero variance everywhere gives 1. Constant chains at different values have
    no within-chain variance; the result is then flagged degenerate, with
    value DEGENERATE_RHAT, and a warning is logged.
    """
    chains = [np.asarray(t, dtype=float) for t in traces]
    if len(chains) < 2:
        raise DiagnosticsError("Gelman-Rubin needs at least two chains")
    lengths = {len(c) for c in chains}
    if len(lengths) != 1:
        raise DiagnosticsError(f"chains have different lengths: {sorted(lengths)}")
    n = lengths.pop()
    if n < 2:
        raise DiagnosticsError("Gelman-Rubin needs chains of length >= 2")

    m = len(chains)
    means = np.array([c.mean() for c in chains])
    within = float(np.mean([c.var(ddof=1) for c in chains]))
    between = float(n / (m - 1) * np.sum((means - means.mean()) ** 2))

    if within == 0:
        if between == 0:
            return RHat(1.0)
        logger.warning("Gelman-Rubin: chains are constant at different values")
        return RHat(DEGENERATE_RHAT, degenerate=True)

    pooled = (n - 1) / n * within + between / n
    return RHat(float(np.sqrt(pooled / within)))


def gelman_rubin_by_rank(chains_ordered):
    """R̂ per rank for a list of ``records × d`` order-statistic arrays"""
    length = min(len(o) for o in chains_ordered)
    ranks = chains_ordered[0].shape[1]
    return [gelman_rubin([o[:length, k] for o in chains_ordered]) for k in range(ranks)]