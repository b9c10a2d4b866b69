# src/forests/seeding.py
"""
Spanning-tree samplers and initial-plan construction.

The initial plan comes from recursive bipartition: draw a spanning tree of the
unassigned region, list the tree edges whose removal splits off a piece that
fits the population window while leaving a remainder that can still be
divided, cut one of them uniformly, and recurse on the remainder.
"""

import itertools
import logging
import math
from collections import deque

import networkx as nx

from core.exceptions import ConfigError, EnumerationGuardError, SeedingError
from core.rng import draw_index, draw_weighted
from forests.state import ForestState

logger = logging.getLogger("cyclewalk.forests")

SPANNING_TREE_GUARD = 2_000_000


def _induced_neighbors(graph, members, weighted):
    """Per member: neighbor list inside ``members`` and cumulative transition weights"""
    table = {}
    for v in members:
        steps = []
        cumulative = []
        total = 0.0
        for w, eid in graph.neighbors(v):
            if w in members:
                total += graph.weights[eid] if weighted else 1.0
                steps.append((w, eid))
                cumulative.append(total)
        table[v] = (steps, cumulative)
    return table


def wilson_ust(graph, vertices, rng, weighted=False):
    """
    Spanning tree of the induced subgraph by loop-erased random walks.

    Unweighted, the tree is uniform; weighted, its probability is proportional
    to the product of its edge weights. Returns a set of edge ids.
    """
    members = set(vertices)
    if not members:
        raise SeedingError("cannot draw a spanning tree of an empty vertex set")
    if not graph.is_connected(members):
        raise SeedingError(f"induced subgraph on {len(members)} vertices is disconnected")

    order = sorted(members)
    table = _induced_neighbors(graph, members, weighted)
    in_tree = {order[draw_index(rng, len(order))]}
    successor = {}
    tree = set()

    for start in order:
        # Overwriting the successor of a revisited vertex erases the loop
        v = start
        while v not in in_tree:
            steps, cumulative = table[v]
            successor[v] = steps[draw_weighted(rng, cumulative)]
            v = successor[v][0]
        v = start
        while v not in in_tree:
            in_tree.add(v)
            w, eid = successor[v]
            tree.add(eid)
            v = w
    return tree


def random_mst(graph, vertices, rng, weighted=False):
    """Minimum spanning tree under i.i.d. uniform edge weights (not uniform over trees)"""
    members = set(vertices)
    if not graph.is_connected(members):
        raise SeedingError(f"induced subgraph on {len(members)} vertices is disconnected")
    subgraph = nx.Graph()
    subgraph.add_nodes_from(sorted(members))
    for eid in graph.induced_edges(members):
        u, v = graph.endpoints(eid)
        subgraph.add_edge(u, v, eid=eid, weight=float(rng.random()))
    tree = nx.minimum_spanning_tree(subgraph, weight="weight", algorithm="kruskal")
    return {data["eid"] for _, _, data in tree.edges(data=True)}


def enumerate_spanning_trees(graph, vertices):
    """Every spanning tree of a small induced subgraph, as frozensets of edge ids"""
    members = set(vertices)
    edges = graph.induced_edges(members)
    size = len(members) - 1
    if math.comb(len(edges), size) > SPANNING_TREE_GUARD:
        raise EnumerationGuardError(
            f"{math.comb(len(edges), size)} edge subsets to test on {len(members)} vertices"
        )
    trees = []
    for subset in itertools.combinations(edges, size):
        components = nx.utils.UnionFind(members)
        for eid in subset:
            u, v = graph.endpoints(eid)
            if components[u] == components[v]:
                break
            components.union(u, v)
        else:
            trees.append(frozenset(subset))
    return trees


TREE_SAMPLERS = {
    "ust": wilson_ust,
    "mst": random_mst,
}


def get_tree_sampler(method):
    try:
        return TREE_SAMPLERS[method]
    except KeyError:
        raise ConfigError("seeding", f"unknown tree sampler '{method}'")


def _tree_adjacency(graph, tree):
    adjacency = {}
    for eid in tree:
        u, v = graph.endpoints(eid)
        adjacency.setdefault(u, []).append((v, eid))
        adjacency.setdefault(v, []).append((u, eid))
    return adjacency


def _balanced_cuts(graph, region, tree, remaining, bounds):
    """Tree edges of ``region`` whose removal leaves a fitting piece and a divisible rest"""
    adjacency = _tree_adjacency(graph, tree)
    root = min(region)
    parent = {root: (None, None)}
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w, eid in adjacency.get(v, ()):
            if w not in parent:
                parent[w] = (v, eid)
                order.append(w)
                queue.append(w)

    subtree = {v: graph.populations[v] for v in order}
    for v in reversed(order[1:]):
        subtree[parent[v][0]] += subtree[v]

    total = subtree[root]
    rest_parts = remaining - 1
    cuts = []
    for v in order[1:]:
        below = subtree[v]
        for piece, rest, side in ((below, total - below, "below"), (total - below, below, "above")):
            if bounds.contains(piece) and rest_parts * bounds.lower <= rest <= rest_parts * bounds.upper:
                cuts.append((v, parent[v], side))
    return cuts, adjacency


def _split_piece(region, adjacency, child, parent_info, side):
    parent_vertex, cut_eid = parent_info
    below = {child}
    queue = deque([child])
    while queue:
        v = queue.popleft()
        for w, eid in adjacency.get(v, ()):
            if eid != cut_eid and w not in below:
                below.add(w)
                queue.append(w)
    return below if side == "below" else region - below


def seed_random_state(
    graph, districts, bounds, rng, max_retries=100, method="ust", weighted=False
):
    """Balanced, connected initial ForestState by recursive bipartition"""
    sampler = get_tree_sampler(method)
    total = graph.total_population
    if not bounds.supports(total, districts):
        raise SeedingError(
            f"population window [{bounds.lower}, {bounds.upper}] cannot hold {districts} "
            f"districts of total population {total}; try a larger tolerance"
        )

    assignment = [0] * graph.vertex_count
    region = set(range(graph.vertex_count))
    for label in range(1, districts):
        remaining = districts - label + 1
        for attempt in range(1, max_retries + 1):
            tree = sampler(graph, region, rng, weighted)
            cuts, adjacency = _balanced_cuts(graph, region, tree, remaining, bounds)
            if cuts:
                child, parent_info, side = cuts[draw_index(rng, len(cuts))]
                piece = _split_piece(region, adjacency, child, parent_info, side)
                break
            logger.debug(f"District {label}: no balanced cut on attempt {attempt}")
        else:
            raise SeedingError(
                f"no balanced split for district {label} after {max_retries} attempts; "
                f"try a larger population tolerance"
            )
        for v in piece:
            assignment[v] = label
        region -= piece

    if not bounds.contains(graph.population(region)):
        raise SeedingError("final district falls outside the population window")
    for v in region:
        assignment[v] = districts

    members = {label: set() for label in range(1, districts + 1)}
    for v, label in enumerate(assignment):
        members[label].add(v)
    trees = [sorted(sampler(graph, members[label], rng, weighted)) for label in members]

    state = ForestState.from_assignment(graph, assignment, trees, bounds, weighted)
    logger.info(
        f"Seeded {districts} districts with populations "
        f"{[state.populations[label] for label in range(1, districts + 1)]}"
    )
    return state
