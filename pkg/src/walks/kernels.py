# src/walks/kernels.py
"""
The 1-tree and 2-tree cycle walks and their mixture.

Both kernels sample from exactly the choices that ``one_tree_moves`` and
``two_tree_moves`` enumerate, so the exhaustive kernel audits in the tests
exercise the same cycle construction, removal weights and acceptance ratio
the chains use.
"""

import copy
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate, combinations

from core.exceptions import ConfigError, TreeCountError
from core.rng import draw_index, draw_weighted
from energy.scores import total_score
from energy.trees import log_tree_count
from forests.state import pair_key
from walks.acceptance import acceptance_log_ratio, acceptance_probability, metropolis_accept
from walks.cuts import valid_cut_pairs
from walks.proposals import Proposal2Tree, StepKind, StepOutcome

logger = logging.getLogger("cyclewalk.walks")


# 1-tree walk


def _internal_cycle(state, eid):
    """Cycle closed by adding internal non-tree edge ``eid``: tree path edges plus ``eid``"""
    graph = state.graph
    u, v = graph.endpoints(eid)
    path = state.forest.tree_path(u, v)
    edges = [graph.edge_between(path[k], path[k + 1]) for k in range(len(path) - 1)]
    edges.append(eid)
    return edges


def _swap_tree_edge(state, removed, added):
    graph = state.graph
    state.forest.cut(*graph.endpoints(removed))
    state.forest.link(*graph.endpoints(added))


def step_1tree(state, spec, rng):
    """
    Add a uniform internal non-tree edge to a uniform district's tree and drop
    a cycle edge with probability proportional to 1/α. Always accepted.
    """
    district = 1 + draw_index(rng, state.districts)
    if state.is_tree_like(district):
        return StepOutcome(StepKind.ONE_TREE, accepted=True, extra={"district": district})

    graph = state.graph
    bag = state.internal_edges[district]
    while True:
        added = bag.choice(rng)
        if not state.forest.has_edge(*graph.endpoints(added)):
            break

    cycle = _internal_cycle(state, added)
    if state.weighted:
        cumulative = list(accumulate(1.0 / state.alpha(e) for e in cycle))
        removed = cycle[draw_weighted(rng, cumulative)]
    else:
        removed = cycle[draw_index(rng, len(cycle))]
    if removed == added:
        return StepOutcome(StepKind.ONE_TREE, accepted=True, extra={"district": district})
    _swap_tree_edge(state, removed, added)
    return StepOutcome(StepKind.ONE_TREE, accepted=True, changed=True, extra={"district": district})


def one_tree_moves(state):
    """
    Exact 1-tree kernel from ``state`` as ``(probability, removed, added)``.

    Probabilities are Fractions; ``removed is None`` marks an unchanged forest.
    """
    graph = state.graph
    moves = []
    pick_district = Fraction(1, state.districts)
    for district in range(1, state.districts + 1):
        if state.is_tree_like(district):
            moves.append((pick_district, None, None))
            continue
        candidates = [
            eid
            for eid in state.internal_edges[district]
            if not state.forest.has_edge(*graph.endpoints(eid))
        ]
        pick_edge = pick_district / len(candidates)
        for added in candidates:
            cycle = _internal_cycle(state, added)
            weights = [1 / Fraction(state.alpha(e)) for e in cycle]
            normalizer = sum(weights)
            for removed, weight in zip(cycle, weights):
                probability = pick_edge * weight / normalizer
                if removed == added:
                    moves.append((probability, None, None))
                else:
                    moves.append((probability, removed, added))
    return moves


def apply_one_tree_move(state, removed, added):
    if removed is not None:
        _swap_tree_edge(state, removed, added)


# 2-tree walk


@dataclass
class _MergedCycle:
    """A district pair joined through ``added[0]``, with the cycle ``added[1]`` closes"""

    pair: tuple
    added: tuple
    vertices: tuple
    edges: tuple
    candidates: list
    cumulative: list


class _Aggregates:
    __slots__ = ("ideal", "populations", "areas", "perimeters")

    def __init__(self, ideal, populations, areas, perimeters):
        self.ideal = ideal
        self.populations = populations
        self.areas = areas
        self.perimeters = perimeters


def _open_cycle(state, pair, e1, e2):
    """Link ``e1`` and lay out the cycle through ``e2``; the caller must close it"""
    graph = state.graph
    forest = state.forest
    forest.link(*graph.endpoints(e1))
    u2, v2 = graph.endpoints(e2)
    profile = forest.path_mass_profile(u2, v2)
    vertices = profile.vertices
    edges = [graph.edge_between(vertices[k], vertices[k + 1]) for k in range(len(vertices) - 1)]
    edges.append(e2)
    candidates = valid_cut_pairs(profile.masses, state.bounds)
    if state.weighted:
        weights = [
            1.0 / (state.alpha(edges[c.first]) * state.alpha(edges[c.second]))
            for c in candidates
        ]
        cumulative = list(accumulate(weights))
    else:
        cumulative = [float(k) for k in range(1, len(candidates) + 1)]
    return _MergedCycle(
        pair=pair,
        added=(e1, e2),
        vertices=vertices,
        edges=tuple(edges),
        candidates=candidates,
        cumulative=cumulative,
    )


def _close_cycle(state, cycle):
    state.forest.cut(*state.graph.endpoints(cycle.added[0]))


def _split_component(state, cycle, candidate):
    """Vertices on the arc side of the removal pair, read off the merged tree"""
    graph = state.graph
    neighbors = state.forest.neighbors
    blocked = set()
    for eid in (cycle.edges[candidate.first], cycle.edges[candidate.second]):
        u, v = graph.endpoints(eid)
        blocked.add((u, v))
        blocked.add((v, u))
    start = cycle.vertices[candidate.first + 1]
    side = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in neighbors[v]:
            if w not in side and (v, w) not in blocked:
                side.add(w)
                stack.append(w)
    return side


def _boundary_and_adjacency(state, a, b, relabel):
    """
    B' between the new pair, and |adj(τ')|, after moving the vertices in
    ``relabel`` (vertex -> new label). Only edges at a moved vertex change
    which boundary they belong to.
    """
    graph = state.graph
    assignment = state.assignment
    changes = {}
    seen = set()
    for v, label in relabel.items():
        old_label = assignment[v]
        for w, eid in graph.neighbors(v):
            if eid in seen:
                continue
            seen.add(eid)
            old_other = assignment[w]
            new_other = relabel.get(w, old_other)
            if old_label != old_other:
                key = pair_key(old_label, old_other)
                changes[key] = changes.get(key, 0) - 1
            if label != new_other:
                key = pair_key(label, new_other)
                changes[key] = changes.get(key, 0) + 1

    boundary = state.boundary_count(a, b) + changes.get(pair_key(a, b), 0)
    adjacent = len(state.adjacent_pairs)
    for key, change in changes.items():
        if change == 0:
            continue
        before = state.boundary_count(*key)
        if before == 0:
            adjacent += 1
        elif before + change == 0:
            adjacent -= 1
    return boundary, adjacent


def _evaluate(state, spec, cycle, candidate):
    """Proposal2Tree for removing ``candidate`` from the open cycle"""
    a, b = cycle.pair
    removal = (cycle.edges[candidate.first], cycle.edges[candidate.second])
    boundary_before = len(state.cross_edges[cycle.pair])
    adjacent_before = len(state.adjacent_pairs)
    if set(removal) == set(cycle.added):
        return Proposal2Tree(
            pair=cycle.pair,
            added=cycle.added,
            removal=removal,
            cycle_length=len(cycle.edges),
            new_members={a: state.members[a], b: state.members[b]},
            boundary_before=boundary_before,
            boundary_after=boundary_before,
            adjacent_before=adjacent_before,
            adjacent_after=adjacent_before,
            score_before=0.0,
            score_after=0.0,
            identity=True,
        )

    graph = state.graph
    side = _split_component(state, cycle, candidate)
    region = state.members[a] | state.members[b]
    rest = region - side
    # Keep each label on the piece it overlaps most
    if len(side & state.members[a]) + len(rest & state.members[b]) >= len(
        side & state.members[b]
    ) + len(rest & state.members[a]):
        new_members = {a: side, b: rest}
    else:
        new_members = {a: rest, b: side}
    relabel = {v: a for v in new_members[a] - state.members[a]}
    relabel.update((v, b) for v in new_members[b] - state.members[b])
    moved = len(relabel)
    boundary_after, adjacent_after = _boundary_and_adjacency(state, a, b, relabel)

    populations = dict(state.populations)
    areas = state.areas
    perimeters = state.perimeters
    for label, vertices in new_members.items():
        populations[label] = (
            candidate.arc_population if vertices is side else candidate.rest_population
        )
    # Shape aggregates only enter J through the compactness term
    if spec.w_compact != 0:
        areas = dict(areas)
        perimeters = dict(perimeters)
        for label, vertices in new_members.items():
            areas[label] = graph.area(vertices)
            perimeters[label] = graph.perimeter(vertices)
    after = _Aggregates(state.ideal, populations, areas, perimeters)

    return Proposal2Tree(
        pair=cycle.pair,
        added=cycle.added,
        removal=removal,
        cycle_length=len(cycle.edges),
        new_members=new_members,
        boundary_before=boundary_before,
        boundary_after=boundary_after,
        adjacent_before=adjacent_before,
        adjacent_after=adjacent_after,
        score_before=total_score(state, spec),
        score_after=total_score(after, spec),
        pop_change=abs(populations[a] - state.populations[a]) / state.ideal,
        moved=moved,
    )


def _attach_tree_counts(state, spec, proposal):
    """Fill the tree-count terms; at γ = 0 they are never evaluated"""
    if proposal.identity or spec.gamma == 0:
        return
    a, b = proposal.pair
    proposal.log_trees_before = state.log_tree_count(a) + state.log_tree_count(b)
    proposal.new_log_trees = {
        label: log_tree_count(state.graph, vertices, state.weighted)
        for label, vertices in proposal.new_members.items()
    }
    proposal.log_trees_after = sum(proposal.new_log_trees.values())


def _score_proposal(state, spec, cycle, candidate):
    """Evaluated proposal with its log ratio, or None when the tree counts fail"""
    proposal = _evaluate(state, spec, cycle, candidate)
    try:
        _attach_tree_counts(state, spec, proposal)
    except TreeCountError as e:
        logger.warning(f"Rejecting 2-tree proposal on {proposal.pair}: {str(e)}")
        return None
    proposal.log_ratio = acceptance_log_ratio(proposal, spec)
    return proposal


def _commit(state, cycle, proposal):
    """Turn the open cycle into the proposed pair of trees and re-index"""
    graph = state.graph
    forest = state.forest
    e1, e2 = cycle.added
    r1, r2 = proposal.removal
    if e2 in proposal.removal:
        other = r1 if r2 == e2 else r2
        forest.cut(*graph.endpoints(other))
    else:
        forest.cut(*graph.endpoints(r1))
        forest.link(*graph.endpoints(e2))
        forest.cut(*graph.endpoints(r2))
    state.reassign(proposal.new_members, proposal.new_log_trees)


def step_2tree(state, spec, rng):
    """Metropolized 2-tree cycle walk step"""
    pair = state.adjacent_pairs.choice(rng)
    bag = state.cross_edges[pair]
    count = len(bag)
    if count < 2:
        return StepOutcome(StepKind.TWO_TREE, accepted=False, acceptance=0.0)
    i = draw_index(rng, count)
    j = draw_index(rng, count - 1)
    if j >= i:
        j += 1
    e1, e2 = bag[i], bag[j]

    cycle = _open_cycle(state, pair, e1, e2)
    candidate = cycle.candidates[draw_weighted(rng, cycle.cumulative)]
    proposal = _score_proposal(state, spec, cycle, candidate)
    if proposal is None:
        _close_cycle(state, cycle)
        return StepOutcome(StepKind.TWO_TREE, accepted=False, acceptance=0.0)

    outcome = StepOutcome(
        StepKind.TWO_TREE,
        accepted=False,
        acceptance=acceptance_probability(proposal.log_ratio),
        pop_change=proposal.pop_change,
        moved=proposal.moved,
        extra={"pair": pair},
    )
    if proposal.identity:
        _close_cycle(state, cycle)
        outcome.accepted = True
        return outcome
    if metropolis_accept(proposal.log_ratio, rng):
        _commit(state, cycle, proposal)
        outcome.accepted = True
        outcome.changed = True
    else:
        _close_cycle(state, cycle)
    return outcome


def two_tree_moves(state, spec):
    """
    Exact 2-tree kernel from ``state`` as ``(probability, next_state)``.

    ``next_state`` is None for every path that leaves the forest unchanged
    (B < 2, identity re-cuts, rejections). Intended for small instances.
    """
    moves = []
    pick_pair = 1.0 / len(state.adjacent_pairs)
    for pair in list(state.adjacent_pairs):
        bag = state.cross_edges[pair]
        if len(bag) < 2:
            moves.append((pick_pair, None))
            continue
        pick_edges = pick_pair / math.comb(len(bag), 2)
        for e1, e2 in combinations(list(bag), 2):
            cycle = _open_cycle(state, pair, e1, e2)
            total = cycle.cumulative[-1]
            previous = 0.0
            for candidate, cumulative in zip(cycle.candidates, cycle.cumulative):
                probability = pick_edges * (cumulative - previous) / total
                previous = cumulative
                proposal = _score_proposal(state, spec, cycle, candidate)
                if proposal is None or proposal.identity:
                    moves.append((probability, None))
                    continue
                accept = acceptance_probability(proposal.log_ratio)
                if accept > 0:
                    successor = copy.deepcopy(state, {id(state.graph): state.graph})
                    _commit(successor, cycle, proposal)
                    moves.append((probability * accept, successor))
                if accept < 1:
                    moves.append((probability * (1 - accept), None))
            _close_cycle(state, cycle)
    return moves


# Mixture


class CycleWalk:
    """Mixture kernel: a 2-tree step with probability ``p_two_tree``, else a 1-tree step"""

    def __init__(self, spec, p_two_tree):
        if not 0 < p_two_tree <= 1:
            raise ConfigError("p_two_tree", f"must lie in (0, 1], got {p_two_tree}")
        self.spec = spec
        self.p_two_tree = p_two_tree

    def step(self, state, rng):
        if rng.random() < self.p_two_tree:
            return step_2tree(state, self.spec, rng)
        return step_1tree(state, self.spec, rng)
