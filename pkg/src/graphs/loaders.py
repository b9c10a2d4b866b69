# src/graphs/loaders.py
"""
Node-link JSON reading and writing.

Documents carry a ``nodes`` array (index = vertex id) and an ``adjacency``
array whose i-th entry lists the neighbors of vertex i, either as bare integers
or as ``{"id": j, "shared_perim": ..., "weight": ...}`` records.
"""

import json
import logging
import numbers
from pathlib import Path

from core.exceptions import GraphLoadError
from graphs.models import Graph, GraphKeys

logger = logging.getLogger("cyclewalk.graphs")

DEFAULT_AREA = 1.0
DEFAULT_EXTERIOR_PERIMETER = 0.0
DEFAULT_SHARED_PERIMETER = 1.0
DEFAULT_WEIGHT = 1.0


def _number(value, what, vertex=None, edge=None):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise GraphLoadError(f"{what} must be a number, got {value!r}", vertex, edge)
    return float(value)


def _population(value, vertex):
    number = _number(value, "population", vertex=vertex)
    if number < 0:
        raise GraphLoadError(f"negative population {value}", vertex=vertex)
    if number != int(number):
        raise GraphLoadError(f"population must be an integer, got {value}", vertex=vertex)
    return int(number)


def _parse_nodes(nodes, keys):
    populations, areas, perimeters, counties = [], [], [], []
    column_values = {}
    for v, node in enumerate(nodes):
        if not isinstance(node, dict):
            raise GraphLoadError("node record must be an object", vertex=v)
        if keys.population not in node:
            raise GraphLoadError(f"missing '{keys.population}'", vertex=v)
        populations.append(_population(node[keys.population], v))

        area = _number(node.get(keys.area, DEFAULT_AREA), "area", vertex=v)
        perimeter = _number(
            node.get(keys.perimeter, DEFAULT_EXTERIOR_PERIMETER), "perimeter", vertex=v
        )
        if area < 0 or perimeter < 0:
            raise GraphLoadError("negative area or perimeter", vertex=v)
        areas.append(area)
        perimeters.append(perimeter)

        county = node.get(keys.county)
        counties.append(None if county is None else str(county))

        for name, value in node.items():
            if name in keys.reserved():
                continue
            if isinstance(value, numbers.Real) and not isinstance(value, bool):
                column_values.setdefault(name, {})[v] = float(value)

    # Only columns present on every vertex are kept
    columns = {
        name: tuple(values[v] for v in range(len(nodes)))
        for name, values in sorted(column_values.items())
        if len(values) == len(nodes)
    }
    return populations, areas, perimeters, counties, columns


def _parse_adjacency(adjacency, n, keys):
    directed = {}
    for u, entries in enumerate(adjacency):
        if not isinstance(entries, list):
            raise GraphLoadError("adjacency entry must be a list", vertex=u)
        for entry in entries:
            if isinstance(entry, dict):
                if "id" not in entry:
                    raise GraphLoadError("neighbor record without 'id'", vertex=u)
                v, attrs = entry["id"], entry
            else:
                v, attrs = entry, {}
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < n:
                raise GraphLoadError(f"unknown neighbor id {v!r}", vertex=u)
            if v == u:
                raise GraphLoadError("self-loop", edge=(u, v))
            if (u, v) in directed:
                raise GraphLoadError("parallel edge", edge=(u, v))
            directed[(u, v)] = (
                attrs.get(keys.shared_perimeter),
                attrs.get(keys.weight),
            )

    edges, shared, weights = [], [], []
    for (u, v), (forward_shared, forward_weight) in sorted(directed.items()):
        if u > v:
            continue
        if (v, u) not in directed:
            raise GraphLoadError("asymmetric adjacency", edge=(u, v))
        backward_shared, backward_weight = directed[(v, u)]
        values = []
        for what, a, b, default in (
            ("shared perimeter", forward_shared, backward_shared, DEFAULT_SHARED_PERIMETER),
            ("weight", forward_weight, backward_weight, DEFAULT_WEIGHT),
        ):
            if a is not None and b is not None and a != b:
                raise GraphLoadError(f"asymmetric {what} ({a} vs {b})", edge=(u, v))
            chosen = a if a is not None else b
            values.append(default if chosen is None else _number(chosen, what, edge=(u, v)))
        shared_perim, weight = values
        if weight <= 0:
            raise GraphLoadError(f"non-positive weight {weight}", edge=(u, v))
        if shared_perim < 0:
            raise GraphLoadError(f"negative shared perimeter {shared_perim}", edge=(u, v))
        edges.append((u, v))
        shared.append(shared_perim)
        weights.append(weight)

    for (u, v) in directed:
        if u > v and (v, u) not in directed:
            raise GraphLoadError("asymmetric adjacency", edge=(v, u))
    return edges, shared, weights


def load_graph(text, keys=None):
    """Parse and validate a node-link JSON document"""
    keys = keys or GraphKeys()
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphLoadError(f"malformed document: {e.msg} at line {e.lineno}")

    if not isinstance(document, dict):
        raise GraphLoadError("malformed document: top level must be an object")
    nodes = document.get("nodes")
    adjacency = document.get("adjacency")
    if not isinstance(nodes, list) or not isinstance(adjacency, list):
        raise GraphLoadError("malformed document: 'nodes' and 'adjacency' arrays required")
    if len(nodes) != len(adjacency):
        raise GraphLoadError(
            f"malformed document: {len(nodes)} nodes but {len(adjacency)} adjacency lists"
        )
    if not nodes:
        raise GraphLoadError("malformed document: no nodes")

    populations, areas, perimeters, counties, columns = _parse_nodes(nodes, keys)
    edges, shared, weights = _parse_adjacency(adjacency, len(nodes), keys)

    graph = Graph(
        populations=tuple(populations),
        edges=tuple(edges),
        areas=tuple(areas),
        exterior_perimeters=tuple(perimeters),
        shared_perimeters=tuple(shared),
        weights=tuple(weights),
        counties=tuple(counties),
        columns=columns,
    )

    parts = graph.components()
    if len(parts) > 1:
        sizes = sorted((len(p) for p in parts), reverse=True)
        isolated = min(min(p) for p in parts if len(p) == sizes[-1])
        raise GraphLoadError(f"disconnected graph, component sizes {sizes}", vertex=isolated)
    if graph.total_population <= 0:
        raise GraphLoadError("total population must be positive")

    logger.debug(f"Loaded graph with {graph.vertex_count} vertices, {graph.edge_count} edges")
    return graph


def load_graph_file(path, keys=None):
    return load_graph(Path(path).read_text(encoding="utf-8"), keys)


def export_graph(graph, keys=None):
    """Serialize ``graph`` back into the node-link format"""
    keys = keys or GraphKeys()
    nodes = []
    for v in range(graph.vertex_count):
        node = {
            "id": v,
            keys.population: graph.populations[v],
            keys.area: graph.areas[v],
            keys.perimeter: graph.exterior_perimeters[v],
        }
        if graph.counties[v] is not None:
            node[keys.county] = graph.counties[v]
        for name, values in graph.columns.items():
            node[name] = values[v]
        nodes.append(node)

    adjacency = []
    for v in range(graph.vertex_count):
        adjacency.append(
            [
                {
                    "id": w,
                    keys.shared_perimeter: graph.shared_perimeters[eid],
                    keys.weight: graph.weights[eid],
                }
                for w, eid in sorted(graph.neighbors(v))
            ]
        )

    document = {
        "directed": False,
        "multigraph": False,
        "graph": {},
        "nodes": nodes,
        "adjacency": adjacency,
    }
    return json.dumps(document, indent=2)


def write_graph_file(graph, path, keys=None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(export_graph(graph, keys) + "\n", encoding="utf-8")
    return path
