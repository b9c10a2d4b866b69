# src/forests/state.py
"""
Chain state: a spanning forest with one tree per district, plus the
indexes the walks need.

District labels run ``1..d``. Every graph edge lives in exactly one bag:
the internal bag of its district, or the cross bag of the unordered district
pair it connects. Only non-empty cross bags are kept, so their keys are
exactly adj(τ).
"""

import hashlib
import math
import numbers
from dataclasses import dataclass, field

from core.exceptions import StateAuditError, StateError
from core.rng import draw_index
from energy.trees import log_tree_count
from forests.linkcut import DynamicForest

POPULATION_EPSILON = 1e-9


class IndexedBag:
    """Set with constant-time add, discard and uniform draws"""

    __slots__ = ("items", "positions")

    def __init__(self, items=()):
        self.items = []
        self.positions = {}
        for item in items:
            self.add(item)

    def add(self, item):
        if item not in self.positions:
            self.positions[item] = len(self.items)
            self.items.append(item)

    def discard(self, item):
        index = self.positions.pop(item, None)
        if index is None:
            return
        last = self.items.pop()
        if last != item:
            self.items[index] = last
            self.positions[last] = index

    def choice(self, rng):
        return self.items[draw_index(rng, len(self.items))]

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __contains__(self, item):
        return item in self.positions

    def __getitem__(self, index):
        return self.items[index]


def pair_key(a, b):
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class PopBounds:
    """Admissible district population window (inclusive integers)"""

    ideal: float
    lower: int
    upper: int
    tolerance: float | None = None

    @classmethod
    def from_tolerance(cls, total, districts, tolerance):
        if tolerance < 0:
            raise ValueError(f"population tolerance must be >= 0, got {tolerance}")
        ideal = total / districts
        lower = math.ceil(ideal * (1 - tolerance) - POPULATION_EPSILON)
        upper = math.floor(ideal * (1 + tolerance) + POPULATION_EPSILON)
        return cls(ideal, max(lower, 0), upper, tolerance)

    @classmethod
    def explicit(cls, total, districts, lower, upper):
        return cls(total / districts, int(lower), int(upper))

    @classmethod
    def unbounded(cls, total, districts):
        return cls(total / districts, 0, total)

    @property
    def feasible(self):
        return self.lower <= self.upper

    def contains(self, population):
        return self.lower <= population <= self.upper

    def intersect(self, other):
        """Window admitted by both; the tighter tolerance is kept"""
        tolerances = [t for t in (self.tolerance, other.tolerance) if t is not None]
        return PopBounds(
            self.ideal,
            max(self.lower, other.lower),
            min(self.upper, other.upper),
            min(tolerances) if tolerances else None,
        )

    def supports(self, total, districts):
        """Can ``total`` be split into ``districts`` parts inside the window?"""
        return self.feasible and districts * self.lower <= total <= districts * self.upper

    def as_dict(self):
        return {
            "ideal": self.ideal,
            "lower": self.lower,
            "upper": self.upper,
            "tolerance": self.tolerance,
        }


@dataclass
class PartitionSummary:
    """Per-district aggregates of an assignment, without any forest"""

    districts: int
    ideal: float
    members: dict = field(default_factory=dict)
    populations: dict = field(default_factory=dict)
    areas: dict = field(default_factory=dict)
    perimeters: dict = field(default_factory=dict)
    cut_edges: int = 0

    @classmethod
    def from_assignment(cls, graph, assignment, districts=None):
        districts = districts or max(assignment)
        summary = cls(districts=districts, ideal=graph.total_population / districts)
        for label in range(1, districts + 1):
            summary.members[label] = set()
        for v, label in enumerate(assignment):
            if label not in summary.members:
                raise StateError(f"label outside 1..{districts}", district=label)
            summary.members[label].add(v)
        for label, vertices in summary.members.items():
            summary.populations[label] = graph.population(vertices)
            summary.areas[label] = graph.area(vertices)
            summary.perimeters[label] = graph.perimeter(vertices)
        summary.cut_edges = sum(
            1 for u, v in graph.edges if assignment[u] != assignment[v]
        )
        return summary


class ForestState:
    """Live chain state; exactly one chain owns and mutates an instance"""

    def __init__(self, graph, districts, bounds, weighted=False):
        self.graph = graph
        self.districts = districts
        self.bounds = bounds
        self.weighted = weighted
        self.forest = DynamicForest(graph.populations)
        self.assignment = [0] * graph.vertex_count
        self.members = {}
        self.populations = {}
        self.areas = {}
        self.perimeters = {}
        self.internal_edges = {}
        self.cross_edges = {}
        self.adjacent_pairs = IndexedBag()
        self._log_trees = {}

    @property
    def ideal(self):
        return self.graph.total_population / self.districts

    def alpha(self, eid):
        return self.graph.weights[eid] if self.weighted else 1.0

    # Construction

    @classmethod
    def from_assignment(cls, graph, assignment, trees, bounds=None, weighted=False):
        """
        Build and fully index a state.

        ``trees[i]`` is the spanning tree of district ``i + 1``, given as edge
        ids or vertex pairs.
        """
        districts = len(trees)
        if len(assignment) != graph.vertex_count:
            raise StateError(
                f"assignment has {len(assignment)} entries for {graph.vertex_count} vertices"
            )
        bounds = bounds or PopBounds.unbounded(graph.total_population, districts)
        state = cls(graph, districts, bounds, weighted)
        state.assignment = [int(label) for label in assignment]

        for v, label in enumerate(state.assignment):
            if not 1 <= label <= districts:
                raise StateError(f"vertex {v} carries a label outside 1..{districts}", label)

        state._index_partition()
        for label in range(1, districts + 1):
            vertices = state.members[label]
            if not vertices:
                raise StateError("empty district", label)
            if not graph.is_connected(vertices):
                raise StateError("district is not connected", label)
            if not bounds.contains(state.populations[label]):
                raise StateError(
                    f"population {state.populations[label]} outside "
                    f"[{bounds.lower}, {bounds.upper}]",
                    label,
                )

        for index, tree in enumerate(trees):
            label = index + 1
            edge_ids = [state._edge_id(edge, label) for edge in tree]
            vertices = state.members[label]
            if len(set(edge_ids)) != len(vertices) - 1:
                raise StateError(
                    f"tree has {len(set(edge_ids))} edges for {len(vertices)} vertices", label
                )
            for eid in set(edge_ids):
                u, v = graph.endpoints(eid)
                if u not in vertices or v not in vertices:
                    raise StateError(f"tree edge {u}-{v} leaves the district", label)
                if state.forest.connected(u, v):
                    raise StateError(f"tree edge {u}-{v} closes a cycle", label)
                state.forest.link(u, v)
        return state

    def _edge_id(self, edge, label):
        if isinstance(edge, numbers.Integral):
            if not 0 <= edge < self.graph.edge_count:
                raise StateError(f"unknown edge id {edge}", label)
            return int(edge)
        u, v = edge
        eid = self.graph.edge_between(u, v)
        if eid is None:
            raise StateError(f"{u}-{v} is not a graph edge", label)
        return eid

    def _index_partition(self):
        """(Re)build members, aggregates and edge bags from the assignment"""
        graph = self.graph
        summary = PartitionSummary.from_assignment(graph, self.assignment, self.districts)
        self.members = summary.members
        self.populations = summary.populations
        self.areas = summary.areas
        self.perimeters = summary.perimeters
        self.internal_edges = {label: IndexedBag() for label in self.members}
        self.cross_edges = {}
        self.adjacent_pairs = IndexedBag()
        for eid, (u, v) in enumerate(graph.edges):
            self._file_edge(eid, u, v)
        self._log_trees = {}

    def _file_edge(self, eid, u, v):
        a, b = self.assignment[u], self.assignment[v]
        if a == b:
            self.internal_edges[a].add(eid)
            return
        key = pair_key(a, b)
        bag = self.cross_edges.get(key)
        if bag is None:
            bag = self.cross_edges[key] = IndexedBag()
            self.adjacent_pairs.add(key)
        bag.add(eid)

    def _unfile_edge(self, eid, u, v):
        a, b = self.assignment[u], self.assignment[v]
        if a == b:
            self.internal_edges[a].discard(eid)
            return
        key = pair_key(a, b)
        bag = self.cross_edges[key]
        bag.discard(eid)
        if not bag:
            del self.cross_edges[key]
            self.adjacent_pairs.discard(key)

    # Mutation used by the 2-tree walk

    def reassign(self, new_members, log_trees=None):
        """
        Move vertices between districts.

        ``new_members`` maps each touched label to its complete new vertex set;
        the union must equal the union of the old sets. Forest edges are the
        caller's business.
        """
        graph = self.graph
        assignment = self.assignment
        moved = [
            (v, label)
            for label, vertices in new_members.items()
            for v in vertices
            if assignment[v] != label
        ]

        # Only edges at a relabeled vertex can change bag
        touched = set()
        for v, _ in moved:
            for _, eid in graph.neighbors(v):
                touched.add(eid)
        for eid in touched:
            self._unfile_edge(eid, *graph.endpoints(eid))

        for v, label in moved:
            assignment[v] = label
        for label, vertices in new_members.items():
            self.members[label] = set(vertices)
            self.populations[label] = graph.population(vertices)
            self.areas[label] = graph.area(vertices)
            self.perimeters[label] = graph.perimeter(self.members[label])
            self._log_trees[label] = None if log_trees is None else log_trees.get(label)

        for eid in touched:
            self._file_edge(eid, *graph.endpoints(eid))

    # Queries

    def pop_deviation(self, district):
        ideal = self.ideal
        return (self.populations[district] - ideal) / ideal

    def cut_edge_count(self):
        return sum(len(bag) for bag in self.cross_edges.values())

    def county_split_count(self):
        counties = self.graph.counties
        labels = {}
        for v, county in enumerate(counties):
            if county is None:
                raise StateError(f"vertex {v} has no county tag")
            labels.setdefault(county, set()).add(self.assignment[v])
        return sum(1 for found in labels.values() if len(found) > 1)

    def boundary_count(self, a, b):
        bag = self.cross_edges.get(pair_key(a, b))
        return len(bag) if bag else 0

    def log_tree_count(self, district):
        """Cached log tree_α of a district's induced subgraph"""
        value = self._log_trees.get(district)
        if value is None:
            value = log_tree_count(self.graph, self.members[district], self.weighted)
            self._log_trees[district] = value
        return value

    def tree_edge_ids(self):
        graph = self.graph
        return sorted(graph.edge_between(u, v) for u, v in self.forest.tree_edges())

    def district_trees(self):
        """Tree edge ids per district, in label order"""
        trees = {label: [] for label in range(1, self.districts + 1)}
        for eid in self.tree_edge_ids():
            u, _ = self.graph.endpoints(eid)
            trees[self.assignment[u]].append(eid)
        return [trees[label] for label in range(1, self.districts + 1)]

    def is_tree_like(self, district):
        """True when the district's induced subgraph has no edge off the tree"""
        return len(self.internal_edges[district]) == len(self.members[district]) - 1

    # Audit

    def reindex(self):
        """Recompute every index from scratch and list the discrepancies"""
        graph = self.graph
        problems = []
        fresh = PartitionSummary.from_assignment(graph, self.assignment, self.districts)

        for label in range(1, self.districts + 1):
            if fresh.members[label] != self.members.get(label):
                problems.append(f"district {label}: member set differs")
            if fresh.populations[label] != self.populations.get(label):
                problems.append(f"district {label}: population differs")
            if not math.isclose(fresh.areas[label], self.areas.get(label, math.nan), abs_tol=1e-9):
                problems.append(f"district {label}: area differs")
            if not math.isclose(
                fresh.perimeters[label], self.perimeters.get(label, math.nan), abs_tol=1e-9
            ):
                problems.append(f"district {label}: perimeter differs")

        internal = {label: set() for label in range(1, self.districts + 1)}
        cross = {}
        for eid, (u, v) in enumerate(graph.edges):
            a, b = self.assignment[u], self.assignment[v]
            if a == b:
                internal[a].add(eid)
            else:
                cross.setdefault(pair_key(a, b), set()).add(eid)
        for label, edges in internal.items():
            if set(self.internal_edges.get(label, ())) != edges:
                problems.append(f"district {label}: internal edge list differs")
        if {k: set(bag) for k, bag in self.cross_edges.items()} != cross:
            problems.append("cross-edge index differs")
        if set(self.adjacent_pairs) != set(cross):
            problems.append("adjacency set differs")

        trees = self.district_trees()
        for label in range(1, self.districts + 1):
            vertices = fresh.members[label]
            if len(trees[label - 1]) != len(vertices) - 1:
                problems.append(f"district {label}: not exactly one spanning tree")
                continue
            root = self.forest.find_root(next(iter(vertices)))
            if any(self.forest.find_root(v) != root for v in vertices):
                problems.append(f"district {label}: tree does not span the district")
            if not self.bounds.contains(fresh.populations[label]):
                problems.append(f"district {label}: population outside bounds")
        for eid in self.tree_edge_ids():
            u, v = graph.endpoints(eid)
            if self.assignment[u] != self.assignment[v]:
                problems.append(f"tree edge {u}-{v} crosses districts")

        for label, cached in self._log_trees.items():
            if cached is None:
                continue
            expected = log_tree_count(graph, fresh.members[label], self.weighted)
            if not math.isclose(cached, expected, rel_tol=1e-9, abs_tol=1e-9):
                problems.append(f"district {label}: cached tree count is stale")
        return problems

    def audit(self):
        problems = self.reindex()
        if problems:
            raise StateAuditError(problems)

    def checksum(self):
        """Digest of the represented state (not the internal splay shape)"""
        digest = hashlib.sha256()
        digest.update(repr(self.assignment).encode())
        digest.update(repr(self.tree_edge_ids()).encode())
        for label in range(1, self.districts + 1):
            digest.update(
                repr(
                    (
                        label,
                        self.populations[label],
                        self.areas[label],
                        self.perimeters[label],
                        sorted(self.internal_edges[label]),
                    )
                ).encode()
            )
        for key in sorted(self.cross_edges):
            digest.update(repr((key, sorted(self.cross_edges[key]))).encode())
        return digest.hexdigest()
