# src/energy/scores.py
"""
Score functions and the log-density of the forest measure.

Scores read per-district aggregates only (``populations``, ``areas``,
``perimeters`` keyed by label, plus ``ideal``), never the labels themselves,
so they are invariant under relabeling. Both ForestState and
PartitionSummary provide that interface.

Up to an additive constant,

    log ν(τ) = -J(ξ_τ) + Σ_{e ∈ τ} log α(e) - γ Σ_i log tree_α(ξ_i)

so γ = 0 weights forests by the product of their edge weights and γ = 1
makes the partition marginal proportional to e^{-J}.
"""

import math

from core.exceptions import StateError
from energy.measures import PopulationMode, ScoreBreakdown

INFEASIBLE = math.inf
GATE_EPSILON = 1e-12

# Observed relation between γ and the compactness weight that keeps the
# average isoperimetric score level with the γ = 0 ensemble
COMPACT_WEIGHT_SLOPE = 0.35


def population_deviations(aggregates):
    ideal = aggregates.ideal
    return {label: (pop - ideal) / ideal for label, pop in aggregates.populations.items()}


def j_population(aggregates, spec):
    deviations = [abs(d) for d in population_deviations(aggregates).values()]
    gated = spec.population_mode in (PopulationMode.HARD, PopulationMode.MIXED)
    if gated and spec.pop_tolerance is not None:
        if max(deviations) > spec.pop_tolerance + GATE_EPSILON:
            return INFEASIBLE
    if spec.population_mode == PopulationMode.HARD:
        return 0.0
    return spec.w_pop * sum(deviations)


def isoperimetric_ratios(aggregates):
    ratios = {}
    for label, area in aggregates.areas.items():
        if area <= 0:
            raise StateError("zero-area district", label)
        ratios[label] = aggregates.perimeters[label] ** 2 / area
    return ratios


def j_compact(aggregates):
    """Sum of perimeter²/area; the caller applies w_compact"""
    return sum(isoperimetric_ratios(aggregates).values())


def total_score(aggregates, spec):
    """J = J_population + w_compact · J_compact, or INFEASIBLE"""
    population = j_population(aggregates, spec)
    if math.isinf(population):
        return INFEASIBLE
    if spec.w_compact == 0:
        return population
    return population + spec.w_compact * j_compact(aggregates)


def score_breakdown(state, spec):
    population = j_population(state, spec)
    compact = j_compact(state)
    log_trees = sum(state.log_tree_count(label) for label in range(1, state.districts + 1))
    total = INFEASIBLE if math.isinf(population) else population + spec.w_compact * compact
    return ScoreBreakdown(population, compact, log_trees, total)


def log_measure(state, spec):
    score = total_score(state, spec)
    if math.isinf(score):
        return -math.inf
    log_alpha = 0.0
    if spec.weighted:
        weights = state.graph.weights
        log_alpha = sum(math.log(weights[eid]) for eid in state.tree_edge_ids())
    tree_term = 0.0
    if spec.gamma != 0:
        tree_term = spec.gamma * sum(
            state.log_tree_count(label) for label in range(1, state.districts + 1)
        )
    return -score + log_alpha - tree_term


def suggest_compact_weight(gamma, slope=COMPACT_WEIGHT_SLOPE):
    """Starting w_compact for a γ > 0 run meant to match γ = 0 compactness"""
    return slope * gamma
