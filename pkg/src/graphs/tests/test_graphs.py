import json
import random

import pytest
from django.core.management import call_command

from core.exceptions import GraphLoadError
from graphs.lattices import make_grid, quadrant_counties, symmetric_perimeter_grid
from graphs.loaders import export_graph, load_graph, load_graph_file
from graphs.models import Graph, GraphKeys, LatticeKind
from graphs.validation import validate
from graphs.weights import county_weighted


def _document(nodes, adjacency):
    return json.dumps({"nodes": nodes, "adjacency": adjacency})


class TestLoadGraph:
    def test_two_node_document_gets_defaults(self):
        graph = load_graph(
            _document([{"pop": 1}, {"pop": 1}], [[1], [0]]),
            GraphKeys(population="pop"),
        )
        assert graph.vertex_count == 2
        assert graph.edge_count == 1
        assert graph.areas == (1.0, 1.0)
        assert graph.exterior_perimeters == (0.0, 0.0)
        assert graph.shared_perimeters == (1.0,)
        assert graph.weights == (1.0,)

    def test_isolated_node_is_disconnected(self):
        text = _document(
            [{"population": 1}, {"population": 1}, {"population": 1}], [[1], [0], []]
        )
        with pytest.raises(GraphLoadError, match="disconnected"):
            load_graph(text)

    def test_round_trip_equals_constructor(self):
        grid = make_grid(4, 4, LatticeKind.SQUARE)
        assert load_graph(export_graph(grid)) == grid

    def test_round_trip_keeps_counties_weights_and_columns(self):
        grid = county_weighted(quadrant_counties(make_grid(4, 4), 4, 4), 2.0)
        grid = Graph(
            populations=grid.populations,
            edges=grid.edges,
            areas=grid.areas,
            exterior_perimeters=grid.exterior_perimeters,
            shared_perimeters=grid.shared_perimeters,
            weights=grid.weights,
            counties=grid.counties,
            columns={"dem": tuple(float(v) for v in range(16))},
        )
        assert load_graph(export_graph(grid)) == grid

    def test_custom_keys(self):
        keys = GraphKeys(population="TOTPOP", weight="w", shared_perimeter="len")
        text = _document(
            [{"TOTPOP": 5}, {"TOTPOP": 7}],
            [[{"id": 1, "w": 3, "len": 0.5}], [{"id": 0, "w": 3, "len": 0.5}]],
        )
        graph = load_graph(text, keys)
        assert graph.populations == (5, 7)
        assert graph.weights == (3.0,)
        assert graph.shared_perimeters == (0.5,)

    def test_asymmetric_adjacency_is_an_error(self):
        text = _document([{"population": 1}] * 3, [[1, 2], [0, 2], [1]])
        with pytest.raises(GraphLoadError, match="asymmetric adjacency"):
            load_graph(text)

    def test_non_positive_weight_names_the_edge(self):
        text = _document(
            [{"population": 1}] * 2,
            [[{"id": 1, "weight": 0}], [{"id": 0, "weight": 0}]],
        )
        with pytest.raises(GraphLoadError) as excinfo:
            load_graph(text)
        assert excinfo.value.edge == (0, 1)

    def test_negative_population_names_the_vertex(self):
        text = _document([{"population": 1}, {"population": -2}], [[1], [0]])
        with pytest.raises(GraphLoadError) as excinfo:
            load_graph(text)
        assert excinfo.value.vertex == 1

    @pytest.mark.parametrize("text", ["not json", "[]", '{"nodes": []}'])
    def test_malformed_documents(self, text):
        with pytest.raises(GraphLoadError, match="malformed"):
            load_graph(text)

    def test_bundled_fixture_matches_constructor(self, fixtures_dir):
        assert load_graph_file(fixtures_dir / "graphs" / "grid_4x4.json") == make_grid(4, 4)
        assert (
            load_graph_file(fixtures_dir / "graphs" / "grid_4x4_perimeter.json")
            == symmetric_perimeter_grid()
        )


class TestMakeGrid:
    @pytest.mark.parametrize(
        "rows,cols,kind,vertices,edges",
        [
            (2, 2, LatticeKind.SQUARE, 4, 4),
            (4, 4, LatticeKind.SQUARE, 16, 24),
            (4, 4, LatticeKind.TRIANGULAR, 16, 33),
            (3, 5, LatticeKind.SQUARE, 15, 22),
        ],
    )
    def test_counts(self, rows, cols, kind, vertices, edges):
        graph = make_grid(rows, cols, kind)
        assert graph.vertex_count == vertices
        assert graph.edge_count == edges
        assert validate(graph) == []

    def test_triangular_interior_degree_is_six(self):
        graph = make_grid(5, 5, LatticeKind.TRIANGULAR)
        for r in range(1, 4):
            for c in range(1, 4):
                assert graph.degree(r * 5 + c) == 6

    def test_rejects_thin_grids(self):
        with pytest.raises(ValueError):
            make_grid(1, 4)

    def test_perimeter_matches_cell_geometry(self):
        graph = make_grid(4, 4)
        rng = random.Random(7)
        for _ in range(200):
            cells = {v for v in range(16) if rng.random() < 0.5}
            if not cells:
                continue
            # Geometric perimeter of a union of unit squares: 4 per cell minus 2 per shared side
            shared = sum(1 for u, v in graph.edges if u in cells and v in cells)
            assert graph.perimeter(cells) == 4 * len(cells) - 2 * shared

    def test_full_region_perimeter(self):
        graph = make_grid(2, 2)
        assert graph.perimeter({0, 1, 2, 3}) == 8
        assert graph.area({0, 1, 2, 3}) == 4

    def test_symmetric_perimeter_grid_is_rotation_invariant(self):
        graph = symmetric_perimeter_grid()

        def rotate(v):
            r, c = divmod(v, 4)
            return c * 4 + (3 - r)

        for u, v in graph.edges:
            eid = graph.edge_between(rotate(u), rotate(v))
            assert graph.shared_perimeters[eid] == graph.shared_perimeters[graph.edge_between(u, v)]
        for v in range(16):
            assert graph.exterior_perimeters[rotate(v)] == graph.exterior_perimeters[v]
        assert sorted(set(graph.shared_perimeters)) == [1.0, 2.0, 2.5, 3.0]


class TestValidate:
    def test_valid_grid(self):
        assert validate(make_grid(3, 3)) == []

    def test_zero_weight_edge(self):
        grid = make_grid(2, 2)
        weights = list(grid.weights)
        weights[0] = 0.0
        broken = Graph(
            populations=grid.populations,
            edges=grid.edges,
            areas=grid.areas,
            exterior_perimeters=grid.exterior_perimeters,
            shared_perimeters=grid.shared_perimeters,
            weights=tuple(weights),
            counties=grid.counties,
        )
        violations = validate(broken)
        assert len(violations) == 1
        u, v = grid.edges[0]
        assert f"{u}-{v}" in violations[0]

    def test_two_components(self):
        graph = Graph(
            populations=(1, 1, 1, 1, 1),
            edges=((0, 1), (2, 3), (3, 4)),
            areas=(1.0,) * 5,
            exterior_perimeters=(0.0,) * 5,
            shared_perimeters=(1.0,) * 3,
            weights=(1.0,) * 3,
            counties=(None,) * 5,
        )
        violations = validate(graph)
        assert violations == ["disconnected: 2 components of sizes [3, 2]"]


class TestCountyWeighting:
    def test_in_county_edges_scaled(self):
        graph = county_weighted(quadrant_counties(make_grid(4, 4), 4, 4), 2.0)
        assert sorted(graph.weights).count(2.0) == 16
        assert sorted(graph.weights).count(1.0) == 8

    def test_missing_county_is_an_error(self):
        with pytest.raises(GraphLoadError, match="county"):
            county_weighted(make_grid(2, 2), 2.0)


class TestMakeGridCommand:
    def test_writes_loadable_file(self, tmp_path):
        out = tmp_path / "grid.json"
        call_command("make_grid", rows=3, cols=3, out=str(out))
        assert load_graph_file(out) == make_grid(3, 3)

    def test_weighted_variant(self, tmp_path):
        out = tmp_path / "weighted.json"
        call_command("make_grid", variant="weighted", out=str(out))
        graph = load_graph_file(out)
        assert graph.has_counties
        assert max(graph.weights) == 2.0
