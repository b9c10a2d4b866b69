import random
import time

import networkx as nx
import pytest

from core.exceptions import ForestError
from forests.linkcut import DynamicForest


def hanging_masses(oracle, path, masses):
    """Mass hanging off each path vertex once the path edges are removed"""
    pruned = oracle.copy()
    pruned.remove_edges_from(zip(path, path[1:]))
    return [sum(masses[x] for x in nx.node_connected_component(pruned, v)) for v in path]


def run_fuzz(n, operations, seed):
    rng = random.Random(seed)
    masses = [rng.randint(0, 9) for _ in range(n)]
    forest = DynamicForest(masses, checked=True)
    oracle = nx.Graph()
    oracle.add_nodes_from(range(n))

    for _ in range(operations):
        u, v = rng.sample(range(n), 2)
        roll = rng.random()
        if roll < 0.45:
            if nx.has_path(oracle, u, v):
                with pytest.raises(ForestError):
                    forest.link(u, v)
            else:
                forest.link(u, v)
                oracle.add_edge(u, v)
        elif roll < 0.75 and oracle.number_of_edges():
            a, b = rng.choice(list(oracle.edges()))
            forest.cut(a, b)
            oracle.remove_edge(a, b)
        elif roll < 0.9:
            assert forest.connected(u, v) == nx.has_path(oracle, u, v)
            if forest.connected(u, v):
                assert forest.find_root(u) == forest.find_root(v)
        else:
            if nx.has_path(oracle, u, v):
                path = forest.tree_path(u, v)
                assert path == nx.shortest_path(oracle, u, v)
                profile = forest.path_mass_profile(u, v)
                assert list(profile.masses) == hanging_masses(oracle, path, masses)
                assert profile.total == sum(
                    masses[x] for x in nx.node_connected_component(oracle, u)
                )
            else:
                with pytest.raises(ForestError):
                    forest.tree_path(u, v)
    assert forest.tree_edges() == sorted(tuple(sorted(e)) for e in oracle.edges())
    assert forest.edge_count == oracle.number_of_edges()


class TestDynamicForest:
    def test_fuzz_against_networkx(self):
        run_fuzz(n=60, operations=4000, seed=3)

    @pytest.mark.slow
    def test_fuzz_large(self):
        run_fuzz(n=10_000, operations=200_000, seed=5)

    def test_link_inside_a_tree_is_an_error(self):
        forest = DynamicForest([1, 1, 1], checked=True)
        forest.link(0, 1)
        forest.link(1, 2)
        with pytest.raises(ForestError):
            forest.link(0, 2)

    def test_cut_of_non_tree_edge_is_an_error(self):
        forest = DynamicForest([1, 1, 1])
        forest.link(0, 1)
        with pytest.raises(ForestError):
            forest.cut(1, 2)

    def test_path_to_self(self):
        forest = DynamicForest([1, 1])
        assert forest.tree_path(1, 1) == [1]

    def test_path_on_a_line(self):
        forest = DynamicForest([1] * 5)
        for u in range(4):
            forest.link(u, u + 1)
        assert forest.tree_path(4, 1) == [4, 3, 2, 1]
        assert forest.tree_path(0, 4) == [0, 1, 2, 3, 4]

    def test_parent_and_children_follow_the_root(self):
        forest = DynamicForest([1] * 4)
        forest.link(0, 1)
        forest.link(1, 2)
        forest.link(1, 3)
        forest.reroot(0)
        assert forest.represented_parent(0) is None
        assert forest.represented_parent(1) == 0
        assert forest.children(1) == {2, 3}
        forest.reroot(2)
        assert forest.represented_parent(1) == 2
        assert forest.children(1) == {0, 3}

    def test_component(self):
        forest = DynamicForest([2, 3, 5, 7])
        forest.link(0, 1)
        forest.link(2, 3)
        assert forest.component(1) == {0, 1}
        assert forest.path_mass_profile(3, 3).total == 12

    def test_path_across_trees_is_an_error(self):
        forest = DynamicForest([1] * 4)
        forest.link(0, 1)
        forest.link(2, 3)
        with pytest.raises(ForestError):
            forest.tree_path(0, 3)
        assert forest.tree_path(1, 0) == [1, 0]
        assert forest.tree_edges() == [(0, 1), (2, 3)]

    def test_profile_on_a_star(self):
        forest = DynamicForest([1, 2, 4, 8, 16])
        # 0-1-2 path with 3 hanging off 1 and 4 hanging off 2
        forest.link(0, 1)
        forest.link(1, 2)
        forest.link(1, 3)
        forest.link(2, 4)
        profile = forest.path_mass_profile(0, 2)
        assert list(profile) == [(0, 1), (1, 10), (2, 20)]
        assert len(profile) == 3


@pytest.mark.slow
def test_million_operations_on_ten_thousand_vertices():
    n = 10_000
    operations = 1_000_000
    rng = random.Random(17)
    forest = DynamicForest([1] * n)
    edges = []
    # Draws are made up front so the timed loop only drives the forest
    script = [
        (rng.random(), rng.randrange(n), rng.randrange(n), rng.random())
        for _ in range(operations)
    ]

    started = time.perf_counter()
    for roll, u, v, pick in script:
        if roll < 0.45:
            if u != v and not forest.connected(u, v):
                forest.link(u, v)
                edges.append((u, v))
        elif roll < 0.75 and edges:
            index = int(pick * len(edges))
            edge = edges[index]
            last = edges.pop()
            if last != edge:
                edges[index] = last
            forest.cut(*edge)
        else:
            forest.find_root(u)
    elapsed = time.perf_counter() - started

    assert forest.edge_count == len(edges)
    assert elapsed < 10.0
