# src/enumerator/exact.py
"""
Exact partition marginal of the forest measure on enumerable graphs.

Summing the forest measure over the spanning forests of a fixed partition ξ
gives e^{-J(ξ)} · tree_α(ξ)^{1-γ} with tree_α(ξ) = Π_i tree_α(ξ_i).
"""

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from energy.scores import j_compact, j_population, total_score
from energy.trees import log_tree_count
from forests.seeding import enumerate_spanning_trees
from forests.state import PartitionSummary

logger = logging.getLogger("cyclewalk.enumerator")


@dataclass
class PartitionRow:
    assignment: tuple
    log_trees: tuple
    j_population: float
    j_compact: float
    j_total: float
    log_weight: float
    probability: float = 0.0

    @property
    def label(self):
        return "-".join(str(label) for label in self.assignment)


@dataclass
class PartitionTable:
    rows: list = field(default_factory=list)
    gamma: float = 0.0

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def total_probability(self):
        return sum(row.probability for row in self.rows)


def cut_edges(graph, assignment):
    return sum(1 for u, v in graph.edges if assignment[u] != assignment[v])


def county_splits(graph, assignment):
    districts = {}
    for v, county in enumerate(graph.counties):
        districts.setdefault(county, set()).add(assignment[v])
    return sum(1 for found in districts.values() if len(found) > 1)


PUSHFORWARDS = {
    "cut_edges": cut_edges,
    "county_splits": county_splits,
}


def exact_partition_distribution(graph, assignments, spec):
    """PartitionTable with weights e^{-J} · tree_α(ξ)^{1-γ}, normalised"""
    table = PartitionTable(gamma=spec.gamma)
    for assignment in assignments:
        summary = PartitionSummary.from_assignment(graph, assignment)
        log_trees = tuple(
            log_tree_count(graph, summary.members[label], spec.weighted)
            for label in range(1, summary.districts + 1)
        )
        total = total_score(summary, spec)
        compact = j_compact(summary) if spec.w_compact else 0.0
        log_weight = -total + (1 - spec.gamma) * sum(log_trees)
        table.rows.append(
            PartitionRow(
                assignment=tuple(assignment),
                log_trees=log_trees,
                j_population=j_population(summary, spec),
                j_compact=compact,
                j_total=total,
                log_weight=log_weight,
            )
        )

    if table.rows:
        log_weights = np.array([row.log_weight for row in table.rows])
        finite = np.isfinite(log_weights)
        if finite.any():
            shift = log_weights[finite].max()
            weights = np.where(finite, np.exp(log_weights - shift), 0.0)
            weights /= weights.sum()
            for row, probability in zip(table.rows, weights):
                row.probability = float(probability)
    logger.info(f"Exact distribution over {len(table)} partitions at gamma={spec.gamma}")
    return table


def exact_pushforward(table, observable, graph=None):
    """
    pmf of ``observable`` under the table, keyed by the value's string form.

    ``observable`` is a callable on assignments, or a name from PUSHFORWARDS
    (which needs ``graph``).
    """
    if isinstance(observable, str):
        function = PUSHFORWARDS[observable]
        observable = lambda assignment: function(graph, assignment)  # noqa: E731
    pmf = {}
    for row in table:
        key = str(observable(row.assignment))
        pmf[key] = pmf.get(key, 0.0) + row.probability
    return dict(sorted(pmf.items(), key=lambda item: _value_order(item[0])))


def _value_order(value):
    try:
        return (0, float(value), value)
    except ValueError:
        return (1, 0.0, value)


def enumerate_forests(graph, assignment):
    """Every spanning forest inducing ``assignment``, one tuple of per-district trees each"""
    districts = max(assignment)
    members = {label: set() for label in range(1, districts + 1)}
    for v, label in enumerate(assignment):
        members[label].add(v)
    per_district = [enumerate_spanning_trees(graph, members[label]) for label in members]
    return list(itertools.product(*per_district))
