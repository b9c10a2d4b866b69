# src/graphs/weights.py
import dataclasses
import logging

from core.exceptions import GraphLoadError

logger = logging.getLogger("cyclewalk.graphs")


def county_weighted(graph, factor):
    """
    Multiply the weight of every in-county edge by ``factor``.

    With weighted measures, heavier in-county edges make spanning trees that
    stay inside a county more likely, which favors plans that split fewer
    counties.
    """
    if factor <= 0:
        raise ValueError(f"county weight factor must be positive, got {factor}")
    for v, county in enumerate(graph.counties):
        if county is None:
            raise GraphLoadError("missing county tag", vertex=v)

    weights = []
    boosted = 0
    for eid, (u, v) in enumerate(graph.edges):
        if graph.counties[u] == graph.counties[v]:
            weights.append(graph.weights[eid] * factor)
            boosted += 1
        else:
            weights.append(graph.weights[eid])

    logger.debug(f"Up-weighted {boosted} in-county edges by {factor}")
    return dataclasses.replace(graph, weights=tuple(weights), columns=dict(graph.columns))
