# src/enumerator/partitions.py
"""
Backtracking enumeration of balanced connected partitions.

Each level seeds a new district at the smallest unassigned vertex and grows
every connected set through it by deciding the frontier vertices one at a
time (include or exclude). Seeding at the smallest vertex means districts are
labelled in order of their smallest member, which is the lexicographically
smallest relabeling of the assignment; each partition appears once.
"""

import logging

from django.conf import settings

from core.exceptions import EnumerationGuardError

logger = logging.getLogger("cyclewalk.enumerator")


def _check_guard(graph, guard):
    if guard is None:
        guard = getattr(settings, "CYCLEWALK", {}).get("ENUMERATION_GUARD", 36)
    if graph.vertex_count > guard:
        raise EnumerationGuardError(
            f"{graph.vertex_count} vertices exceed the enumeration guard of {guard}"
        )


def _connected_sets(graph, start, free, upper):
    """Connected subsets of ``free`` containing ``start`` with population <= upper"""
    populations = graph.populations

    def grow(current, population, frontier, excluded):
        if not frontier:
            yield current, population
            return
        v = frontier[0]
        rest = frontier[1:]
        if population + populations[v] <= upper:
            additions = [
                w
                for w, _ in graph.neighbors(v)
                if w in free and w not in current and w not in excluded and w not in frontier
            ]
            yield from grow(current | {v}, population + populations[v], rest + additions, excluded)
        yield from grow(current, population, rest, excluded | {v})

    frontier = [w for w, _ in graph.neighbors(start) if w in free]
    yield from grow(frozenset([start]), populations[start], list(dict.fromkeys(frontier)), frozenset())


def enumerate_partitions(graph, districts, bounds, guard=None):
    """All balanced connected partitions into ``districts`` parts, canonically labelled"""
    _check_guard(graph, guard)
    found = []
    assignment = [0] * graph.vertex_count

    def place(label, free):
        parts_left = districts - label + 1
        if parts_left == 1:
            if bounds.contains(graph.population(free)) and graph.is_connected(free):
                for v in free:
                    assignment[v] = label
                found.append(tuple(assignment))
                for v in free:
                    assignment[v] = 0
            return
        start = min(free)
        for part, population in _connected_sets(graph, start, free, bounds.upper):
            if population < bounds.lower:
                continue
            rest = free - part
            rest_population = graph.population(rest)
            others = parts_left - 1
            if not others * bounds.lower <= rest_population <= others * bounds.upper:
                continue
            if not rest or len(graph.components(rest)) > others:
                continue
            for v in part:
                assignment[v] = label
            place(label + 1, rest)
            for v in part:
                assignment[v] = 0

    if districts < 1 or not bounds.supports(graph.total_population, districts):
        return found
    place(1, frozenset(range(graph.vertex_count)))
    logger.info(f"Enumerated {len(found)} partitions into {districts} districts")
    return found


def canonical_labels(assignment):
    """Relabel districts in order of first appearance"""
    mapping = {}
    return tuple(mapping.setdefault(label, len(mapping) + 1) for label in assignment)
