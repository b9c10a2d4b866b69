import copy
import dataclasses
import itertools
import math
import random
import time
from collections import Counter, defaultdict
from fractions import Fraction

import pytest

from core.exceptions import ConfigError
from core.rng import chain_rng
from energy.measures import MeasureSpec
from energy.scores import log_measure
from enumerator.exact import enumerate_forests
from enumerator.partitions import enumerate_partitions
from forests.seeding import enumerate_spanning_trees, seed_random_state
from forests.state import ForestState, PopBounds
from graphs.lattices import make_grid
from graphs.models import Graph
from walks.acceptance import acceptance_log_ratio, acceptance_probability, metropolis_accept
from walks.cuts import all_cut_pairs, valid_cut_pairs, windowed_cut_pairs
from walks.kernels import (
    CycleWalk,
    apply_one_tree_move,
    one_tree_moves,
    step_1tree,
    step_2tree,
    two_tree_moves,
)
from walks.proposals import Proposal2Tree, StepKind


def forest_key(state):
    return frozenset(state.tree_edge_ids())


def pairs(cuts):
    return [(c.first, c.second) for c in cuts]


def brute_force_pairs(masses, lower, upper):
    total = sum(masses)
    found = []
    for i, j in itertools.combinations(range(len(masses)), 2):
        arc = sum(masses[i + 1 : j + 1])
        if lower <= arc <= upper and lower <= total - arc <= upper:
            found.append((i, j))
    return found


def single_district_states(graph, weighted=False):
    vertices = range(graph.vertex_count)
    return [
        ForestState.from_assignment(graph, [1] * graph.vertex_count, [sorted(tree)], weighted=weighted)
        for tree in enumerate_spanning_trees(graph, vertices)
    ]


def all_forest_states(graph, districts, bounds, weighted=False):
    states = []
    for assignment in enumerate_partitions(graph, districts, bounds):
        for forest in enumerate_forests(graph, assignment):
            trees = [sorted(tree) for tree in forest]
            states.append(
                ForestState.from_assignment(graph, assignment, trees, bounds, weighted)
            )
    return states


class TestCutPairs:
    def test_opposite_edges(self):
        bounds = PopBounds.explicit(12, 2, 6, 6)
        assert pairs(valid_cut_pairs([3, 3, 3, 3], bounds)) == [(0, 2), (1, 3)]

    def test_matches_brute_force(self):
        masses = [4, 1, 1, 4, 1, 1]
        bounds = PopBounds.explicit(12, 2, 5, 7)
        expected = brute_force_pairs(masses, 5, 7)
        assert pairs(all_cut_pairs(masses, bounds)) == expected
        assert pairs(windowed_cut_pairs(masses, bounds)) == expected

    def test_unbounded_window_takes_every_pair(self):
        masses = [2, 0, 5, 1, 1]
        bounds = PopBounds.unbounded(9, 2)
        assert len(valid_cut_pairs(masses, bounds)) == math.comb(5, 2)

    def test_windowed_agrees_on_random_cycles(self):
        rng = random.Random(17)
        for _ in range(300):
            masses = [rng.randint(0, 6) for _ in range(rng.randint(2, 14))]
            total = sum(masses)
            lower = rng.randint(0, total)
            upper = rng.randint(lower, total + 2)
            bounds = PopBounds(total / 2, lower, upper)
            expected = brute_force_pairs(masses, lower, upper)
            assert pairs(all_cut_pairs(masses, bounds)) == expected
            assert pairs(windowed_cut_pairs(masses, bounds)) == expected

    def test_reported_populations(self):
        cut = valid_cut_pairs([3, 3, 3, 3], PopBounds.explicit(12, 2, 6, 6))[0]
        assert (cut.arc_population, cut.rest_population) == (6, 6)


def proposal(**overrides):
    fields = dict(
        pair=(1, 2),
        added=(0, 1),
        removal=(2, 3),
        cycle_length=4,
        new_members={},
        boundary_before=2,
        boundary_after=2,
        adjacent_before=1,
        adjacent_after=1,
        score_before=0.0,
        score_after=0.0,
    )
    fields.update(overrides)
    return Proposal2Tree(**fields)


class TestAcceptance:
    def test_identity_is_neutral(self):
        assert acceptance_log_ratio(proposal(identity=True, score_after=5.0), MeasureSpec()) == 0

    def test_all_factors_one(self):
        assert acceptance_log_ratio(proposal(), MeasureSpec(gamma=0.0)) == 0.0

    def test_factors(self):
        p = proposal(
            boundary_before=3,
            boundary_after=4,
            adjacent_before=3,
            adjacent_after=2,
            score_before=1.0,
            score_after=1.5,
            log_trees_before=math.log(10),
            log_trees_after=math.log(5),
        )
        expected = math.log(3 / 2) + math.log(6 / 12) + 0.5 * math.log(2) - 0.5
        assert acceptance_log_ratio(p, MeasureSpec(gamma=0.5)) == pytest.approx(expected)
        # Tree counts drop out at gamma = 0
        assert acceptance_log_ratio(p, MeasureSpec(gamma=0.0)) == pytest.approx(
            math.log(3 / 2) + math.log(6 / 12) - 0.5
        )

    def test_infeasible_target(self):
        ratio = acceptance_log_ratio(proposal(score_after=math.inf), MeasureSpec())
        assert ratio == -math.inf
        assert acceptance_probability(ratio) == 0.0
        assert metropolis_accept(ratio, chain_rng(1)) is False

    def test_certain_accept_draws_nothing(self):
        rng = chain_rng(2)
        before = rng.bit_generator.state
        assert metropolis_accept(0.5, rng)
        assert rng.bit_generator.state == before


class TestOneTreeWalk:
    def test_tree_like_district_is_a_noop(self):
        grid = make_grid(4, 4)
        columns = [c + 1 for _ in range(4) for c in range(4)]
        trees = [[(c, c + 4), (c + 4, c + 8), (c + 8, c + 12)] for c in range(4)]
        state = ForestState.from_assignment(grid, columns, trees)
        checksum = state.checksum()
        outcome = step_1tree(state, MeasureSpec(), chain_rng(3))
        assert outcome.accepted and not outcome.changed
        assert state.checksum() == checksum

    @pytest.mark.parametrize("weighted", [False, True])
    def test_detailed_balance_exact(self, weighted):
        grid = make_grid(2, 3)
        if weighted:
            grid = dataclasses.replace(
                grid, weights=tuple(float(1 + eid % 3) for eid in range(grid.edge_count))
            )
        states = single_district_states(grid, weighted)
        mass = {
            forest_key(s): math.prod(Fraction(grid.weights[e]) if weighted else 1 for e in forest_key(s))
            for s in states
        }
        kernel = defaultdict(Fraction)
        for state in states:
            source = forest_key(state)
            row = Fraction(0)
            for probability, removed, added in one_tree_moves(state):
                successor = copy.deepcopy(state, {id(grid): grid})
                apply_one_tree_move(successor, removed, added)
                kernel[(source, forest_key(successor))] += probability
                row += probability
            assert row == 1
        for (source, target), probability in list(kernel.items()):
            assert mass[source] * probability == mass[target] * kernel[(target, source)]

    def test_four_cycle_trees_are_uniform(self):
        grid = make_grid(2, 2)
        state = single_district_states(grid)[0]
        rng = chain_rng(4)
        steps = 40_000
        counts = Counter()
        for _ in range(steps):
            step_1tree(state, MeasureSpec(), rng)
            counts[forest_key(state)] += 1
        assert len(counts) == 4
        for count in counts.values():
            assert abs(count / steps - 0.25) < 0.01

    def test_weighted_four_cycle_follows_products(self):
        grid = make_grid(2, 2)
        grid = dataclasses.replace(grid, weights=(2.0, 1.0, 1.0, 1.0))
        state = single_district_states(grid, weighted=True)[0]
        rng = chain_rng(5)
        steps = 40_000
        counts = Counter()
        for _ in range(steps):
            step_1tree(state, MeasureSpec(weighted=True), rng)
            counts[forest_key(state)] += 1
        # Trees avoiding edge 0 weigh 1, the other three weigh 2
        for tree, count in counts.items():
            expected = (1 if 0 not in tree else 2) / 7
            assert abs(count / steps - expected) < 0.01
        assert state.reindex() == []


class TestTwoTreeWalk:
    @pytest.mark.parametrize(
        "gamma,weighted,w_compact",
        [(0.0, False, 0.0), (0.5, False, 0.0), (1.0, False, 0.0), (1.0, True, 0.3), (0.5, True, 0.0)],
    )
    def test_detailed_balance(self, gamma, weighted, w_compact):
        grid = make_grid(2, 3)
        if weighted:
            grid = dataclasses.replace(
                grid, weights=tuple(float(1 + eid % 3) for eid in range(grid.edge_count))
            )
        spec = MeasureSpec(gamma=gamma, weighted=weighted, w_compact=w_compact)
        bounds = PopBounds.explicit(6, 2, 2, 4)
        states = all_forest_states(grid, 2, bounds, weighted)
        measure = {forest_key(s): math.exp(log_measure(s, spec)) for s in states}

        kernel = defaultdict(float)
        for state in states:
            source = forest_key(state)
            checksum = state.checksum()
            row = 0.0
            for probability, successor in two_tree_moves(state, spec):
                target = source if successor is None else forest_key(successor)
                if successor is not None:
                    assert successor.reindex() == []
                kernel[(source, target)] += probability
                row += probability
            assert row == pytest.approx(1.0, abs=1e-12)
            assert state.checksum() == checksum

        for (source, target), probability in list(kernel.items()):
            forward = measure[source] * probability
            backward = measure[target] * kernel[(target, source)]
            assert forward == pytest.approx(backward, rel=1e-9)

    @pytest.mark.parametrize("gamma", [0.0, 0.5, 1.0])
    def test_detailed_balance_two_by_two(self, gamma):
        grid = make_grid(2, 2)
        spec = MeasureSpec(gamma=gamma)
        states = all_forest_states(grid, 2, PopBounds.explicit(4, 2, 2, 2))
        assert len(states) == 2
        kernel = defaultdict(float)
        for state in states:
            for probability, successor in two_tree_moves(state, spec):
                target = forest_key(state) if successor is None else forest_key(successor)
                kernel[(forest_key(state), target)] += probability
        first, second = (forest_key(s) for s in states)
        assert kernel[(first, second)] == pytest.approx(0.5)
        assert kernel[(second, first)] == pytest.approx(0.5)

    def test_identity_recut(self):
        grid = make_grid(2, 2)
        state = ForestState.from_assignment(
            grid, [1, 2, 1, 2], [[(0, 2)], [(1, 3)]], PopBounds.explicit(4, 2, 2, 2)
        )
        outcomes = Counter()
        rng = chain_rng(6)
        for _ in range(200):
            before = state.checksum()
            outcome = step_2tree(state, MeasureSpec(gamma=1.0), rng)
            assert outcome.accepted
            if not outcome.changed:
                assert state.checksum() == before
                assert outcome.pop_change == 0.0 and outcome.moved == 0
            outcomes[outcome.changed] += 1
        assert outcomes[True] and outcomes[False]
        assert state.reindex() == []

    def test_split_frequencies_on_two_by_two(self):
        grid = make_grid(2, 2)
        state = ForestState.from_assignment(
            grid, [1, 2, 1, 2], [[(0, 2)], [(1, 3)]], PopBounds.explicit(4, 2, 2, 2)
        )
        rng = chain_rng(7)
        steps = 20_000
        vertical = 0
        for _ in range(steps):
            step_2tree(state, MeasureSpec(), rng)
            vertical += state.assignment[0] == state.assignment[2]
        assert abs(vertical / steps - 0.5) < 0.015

    def test_short_boundary_is_rejected(self):
        path = Graph(
            populations=(1, 1, 1, 1),
            edges=((0, 1), (1, 2), (2, 3)),
            areas=(1.0,) * 4,
            exterior_perimeters=(3.0, 2.0, 2.0, 3.0),
            shared_perimeters=(1.0,) * 3,
            weights=(1.0,) * 3,
            counties=(None,) * 4,
        )
        state = ForestState.from_assignment(
            path, [1, 1, 2, 2], [[(0, 1)], [(2, 3)]], PopBounds.explicit(4, 2, 2, 2)
        )
        checksum = state.checksum()
        outcome = step_2tree(state, MeasureSpec(), chain_rng(8))
        assert not outcome.accepted and not outcome.proposed
        assert state.checksum() == checksum

    def test_rejections_restore_the_state(self):
        grid = make_grid(4, 4)
        bounds = PopBounds.explicit(16, 4, 3, 5)
        spec = MeasureSpec(gamma=1.0, w_compact=2.0)
        rng = chain_rng(9)
        state = seed_random_state(grid, 4, bounds, rng)
        rejected = 0
        for step in range(1, 1501):
            before = state.checksum()
            outcome = step_2tree(state, spec, rng)
            if not outcome.accepted:
                rejected += 1
                assert state.checksum() == before
            if step % 250 == 0:
                state.audit()
        assert rejected

    def test_reverse_move_sees_the_same_cycle(self):
        grid = make_grid(4, 4)
        bounds = PopBounds.explicit(16, 4, 3, 5)
        spec = MeasureSpec(gamma=0.0)
        states = [seed_random_state(grid, 4, bounds, chain_rng(seed)) for seed in range(3)]
        for state in states:
            for probability, successor in two_tree_moves(state, spec):
                if successor is None:
                    continue
                back = [s for _, s in two_tree_moves(successor, spec) if s is not None]
                assert any(forest_key(s) == forest_key(state) for s in back)
                break


class TestCycleWalk:
    def test_rejects_zero_two_tree_probability(self):
        with pytest.raises(ConfigError):
            CycleWalk(MeasureSpec(), 0.0)

    def test_always_two_tree_at_one(self):
        grid = make_grid(2, 2)
        state = ForestState.from_assignment(
            grid, [1, 2, 1, 2], [[(0, 2)], [(1, 3)]], PopBounds.explicit(4, 2, 2, 2)
        )
        walk = CycleWalk(MeasureSpec(), 1.0)
        rng = chain_rng(10)
        kinds = {walk.step(state, rng).kind for _ in range(50)}
        assert kinds == {StepKind.TWO_TREE}


@pytest.mark.slow
@pytest.mark.parametrize("weighted", [False, True])
def test_one_tree_walk_on_three_by_three(weighted):
    grid = make_grid(3, 3)
    if weighted:
        grid = dataclasses.replace(grid, weights=(2.0,) + (1.0,) * (grid.edge_count - 1))
    trees = enumerate_spanning_trees(grid, range(9))
    assert len(trees) == 192
    mass = {tree: (2.0 if weighted and 0 in tree else 1.0) for tree in trees}
    normalizer = sum(mass.values())

    state = single_district_states(grid, weighted)[0]
    spec = MeasureSpec(weighted=weighted)
    rng = chain_rng(31)
    steps = 1_000_000
    counts = Counter()
    for _ in range(steps):
        step_1tree(state, spec, rng)
        counts[forest_key(state)] += 1
    tv = 0.5 * sum(abs(counts[tree] / steps - mass[tree] / normalizer) for tree in trees)
    assert tv <= 0.02


@pytest.mark.slow
def test_two_by_two_long_run():
    grid = make_grid(2, 2)
    state = ForestState.from_assignment(
        grid, [1, 2, 1, 2], [[(0, 2)], [(1, 3)]], PopBounds.explicit(4, 2, 2, 2)
    )
    rng = chain_rng(32)
    steps = 1_000_000
    vertical = 0
    for _ in range(steps):
        step_2tree(state, MeasureSpec(), rng)
        vertical += state.assignment[0] == state.assignment[2]
    assert abs(vertical / steps - 0.5) < 0.01


@pytest.mark.slow
def test_million_mixed_steps_on_sixteen_by_sixteen():
    grid = make_grid(16, 16)
    bounds = PopBounds.from_tolerance(grid.total_population, 5, 0.1)
    rng = chain_rng(33)
    state = seed_random_state(grid, 5, bounds, rng)
    walk = CycleWalk(MeasureSpec(gamma=0.0), 0.1)

    started = time.perf_counter()
    for _ in range(1_000_000):
        walk.step(state, rng)
    elapsed = time.perf_counter() - started

    state.audit()
    assert elapsed <= 120.0
