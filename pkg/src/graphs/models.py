# src/graphs/models.py
"""
Immutable attributed graph shared by every chain.

Vertices are the integers ``0..n-1``. Edges are stored once, as ``(u, v)`` with
``u < v``, and addressed everywhere else by their index into ``edges``.
"""

from collections import deque
from dataclasses import dataclass, field, fields
from enum import StrEnum

import networkx as nx

from core.exceptions import ConfigError


class LatticeKind(StrEnum):
    SQUARE = "square"
    TRIANGULAR = "triangular"


@dataclass(frozen=True)
class GraphKeys:
    """Attribute names used in node-link documents"""

    population: str = "population"
    area: str = "area"
    perimeter: str = "perimeter"
    county: str = "county"
    shared_perimeter: str = "shared_perim"
    weight: str = "weight"

    @classmethod
    def from_mapping(cls, mapping):
        known = {f.name for f in fields(cls)}
        unknown = set(mapping or {}) - known
        if unknown:
            raise ConfigError("graph_keys", f"unknown keys {sorted(unknown)}")
        return cls(**{k: str(v) for k, v in (mapping or {}).items()})

    def reserved(self):
        return {self.population, self.area, self.perimeter, self.county, "id"}


@dataclass(frozen=True)
class Graph:
    populations: tuple
    edges: tuple
    areas: tuple
    exterior_perimeters: tuple
    shared_perimeters: tuple
    weights: tuple
    counties: tuple
    columns: dict = field(default_factory=dict)

    _neighbors: tuple = field(init=False, repr=False, compare=False)
    _edge_ids: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        neighbors = [[] for _ in range(len(self.populations))]
        edge_ids = {}
        for eid, (u, v) in enumerate(self.edges):
            if 0 <= u < len(neighbors) and 0 <= v < len(neighbors):
                neighbors[u].append((v, eid))
                if u != v:
                    neighbors[v].append((u, eid))
            edge_ids[(u, v)] = eid
            edge_ids[(v, u)] = eid
        object.__setattr__(self, "_neighbors", tuple(tuple(n) for n in neighbors))
        object.__setattr__(self, "_edge_ids", edge_ids)

    @property
    def vertex_count(self):
        return len(self.populations)

    @property
    def edge_count(self):
        return len(self.edges)

    @property
    def total_population(self):
        return sum(self.populations)

    @property
    def has_counties(self):
        return all(c is not None for c in self.counties)

    def neighbors(self, v):
        """``(w, edge_id)`` pairs adjacent to ``v``"""
        return self._neighbors[v]

    def degree(self, v):
        return len(self._neighbors[v])

    def edge_between(self, u, v):
        return self._edge_ids.get((u, v))

    def endpoints(self, eid):
        return self.edges[eid]

    def population(self, vertices):
        return sum(self.populations[v] for v in vertices)

    def area(self, vertices):
        return sum(self.areas[v] for v in vertices)

    def perimeter(self, vertices):
        """Exterior perimeter of the members plus shared perimeter of leaving edges"""
        members = vertices if isinstance(vertices, (set, frozenset)) else set(vertices)
        total = 0.0
        for v in members:
            total += self.exterior_perimeters[v]
            for w, eid in self._neighbors[v]:
                if w not in members:
                    total += self.shared_perimeters[eid]
        return total

    def induced_edges(self, vertices):
        members = vertices if isinstance(vertices, (set, frozenset)) else set(vertices)
        found = []
        for v in members:
            for w, eid in self._neighbors[v]:
                if v < w and w in members:
                    found.append(eid)
        return sorted(found)

    def components(self, vertices=None):
        """Connected components of the induced subgraph, as vertex sets"""
        members = set(range(self.vertex_count)) if vertices is None else set(vertices)
        seen = set()
        parts = []
        for start in sorted(members):
            if start in seen:
                continue
            part = {start}
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for w, _ in self._neighbors[v]:
                    if w in members and w not in part:
                        part.add(w)
                        queue.append(w)
            seen |= part
            parts.append(part)
        return parts

    def is_connected(self, vertices=None):
        return len(self.components(vertices)) == 1

    def to_networkx(self, weighted=True):
        """Plain networkx view (weights as the ``weight`` attribute)"""
        graph = nx.Graph()
        for v, pop in enumerate(self.populations):
            graph.add_node(v, population=pop, county=self.counties[v])
        for eid, (u, v) in enumerate(self.edges):
            graph.add_edge(u, v, eid=eid, weight=self.weights[eid] if weighted else 1.0)
        return graph
