# src/walks/cuts.py
"""
Balanced removal pairs on a cycle.

A cycle of length L is given by the masses hanging off its vertices
``c_0 .. c_{L-1}``; cycle edge ``k`` joins ``c_k`` and ``c_{k+1 mod L}``.
Removing edges ``i < j`` leaves the arc ``c_{i+1} .. c_j`` on one side and the
rest of the cycle on the other.
"""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from itertools import accumulate


@dataclass(frozen=True)
class CutPair:
    first: int
    second: int
    arc_population: int
    rest_population: int


def _prefix(masses):
    return [0, *accumulate(masses)]


def all_cut_pairs(masses, bounds):
    """Every pair checked against the window; quadratic in the cycle length"""
    prefix = _prefix(masses)
    total = prefix[-1]
    length = len(masses)
    pairs = []
    for i in range(length - 1):
        for j in range(i + 1, length):
            arc = prefix[j + 1] - prefix[i + 1]
            if bounds.contains(arc) and bounds.contains(total - arc):
                pairs.append(CutPair(i, j, arc, total - arc))
    return pairs


def windowed_cut_pairs(masses, bounds):
    """
    Same pairs as ``all_cut_pairs``, visiting only arcs inside the window.

    Masses are non-negative, so for fixed ``i`` the arc mass is non-decreasing
    in ``j`` and the admissible ``j`` form one contiguous run found by bisection.
    """
    prefix = _prefix(masses)
    total = prefix[-1]
    length = len(masses)
    # Both arcs in the window means the first arc lies in [max(lo, total-hi), min(hi, total-lo)]
    low = max(bounds.lower, total - bounds.upper)
    high = min(bounds.upper, total - bounds.lower)
    pairs = []
    if low > high:
        return pairs
    for i in range(length - 1):
        start = prefix[i + 1]
        # j ranges over i+1 .. length-1, i.e. prefix indices i+2 .. length
        first = bisect_left(prefix, start + low, i + 2, length + 1)
        last = bisect_right(prefix, start + high, i + 2, length + 1)
        for index in range(first, last):
            arc = prefix[index] - start
            pairs.append(CutPair(i, index - 1, arc, total - arc))
    return pairs


def valid_cut_pairs(masses, bounds):
    """Balanced removal pairs, windowed when the population window is narrow"""
    total = sum(masses)
    if 2 * (bounds.upper - bounds.lower) < total:
        return windowed_cut_pairs(masses, bounds)
    return all_cut_pairs(masses, bounds)
