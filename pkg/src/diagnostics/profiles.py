# src/diagnostics/profiles.py
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

DEFAULT_PROFILE_BINS = 20


@dataclass(frozen=True)
class ProfileBin:
    low: float
    high: float
    count: int
    frequency: float
    q1: float
    median: float
    q3: float


@dataclass
class ProposalProfile:
    bins: list = field(default_factory=list)
    moved: dict = field(default_factory=dict)
    proposals: int = 0


def proposal_profiles(outcomes, bins=DEFAULT_PROFILE_BINS):
    """
    Acceptance probability against relative population change, plus the
    histogram of vertices moved among proposals with positive acceptance.

    ``outcomes`` are proposal records (``pop_change``, ``acceptance``,
    ``moved``); only non-empty bins are reported.
    """
    records = [r for r in outcomes if r.get("pop_change") is not None]
    profile = ProposalProfile(proposals=len(records))
    if not records:
        return profile

    changes = np.array([r["pop_change"] for r in records], dtype=float)
    acceptance = np.array([r["acceptance"] for r in records], dtype=float)
    low, high = float(changes.min()), float(changes.max())
    if low == high:
        edges = np.array([low, high])
        index = np.zeros(len(changes), dtype=int)
    else:
        edges = np.linspace(low, high, bins + 1)
        index = np.clip(np.searchsorted(edges, changes, side="right") - 1, 0, bins - 1)

    for k in range(len(edges) - 1):
        selected = acceptance[index == k]
        if not len(selected):
            continue
        q1, median, q3 = np.percentile(selected, [25, 50, 75])
        profile.bins.append(
            ProfileBin(
                low=float(edges[k]),
                high=float(edges[k + 1]),
                count=int(len(selected)),
                frequency=len(selected) / len(records),
                q1=float(q1),
                median=float(median),
                q3=float(q3),
            )
        )

    moved = Counter(r["moved"] for r in records if r["acceptance"] > 0)
    profile.moved = dict(sorted(moved.items()))
    return profile
