# src/core/rng.py
"""
Random streams for chains.

Every chain owns one numpy Generator (PCG64). Chain ``i`` of a launch with base
seed ``s`` draws from ``SeedSequence([s, i])``; numpy's SeedSequence hashes the
entropy words together, so streams for different indices are independent and
each one is reproducible on its own.
"""

from bisect import bisect_right

import numpy as np


def chain_seed_sequence(base_seed, chain_index=0):
    return np.random.SeedSequence([int(base_seed) & 0xFFFFFFFFFFFFFFFF, int(chain_index)])


def chain_rng(base_seed, chain_index=0):
    """Generator for one chain of a (possibly multi-chain) launch"""
    return np.random.Generator(np.random.PCG64(chain_seed_sequence(base_seed, chain_index)))


def draw_index(rng, n):
    """Uniform index in ``range(n)``; cheaper than ``rng.integers`` per call"""
    return int(rng.random() * n)


def draw_weighted(rng, cumulative):
    """Index drawn proportionally to the increments of a cumulative weight list"""
    return min(bisect_right(cumulative, rng.random() * cumulative[-1]), len(cumulative) - 1)
