# src/graphs/lattices.py
"""
Regular lattice constructors.

Vertex ``r * cols + c`` is the cell in row ``r`` and column ``c``. Every cell
has unit area and unit sides; a square cell has 4 sides and a triangular-lattice
cell (a hexagon in the dual picture) has 6, so the exterior perimeter of a cell
is its side count minus its degree.
"""

from graphs.models import Graph, LatticeKind

# Shared perimeters of the symmetric 4x4 configuration
CORNER_EDGE_LENGTH = 2.0
OUTER_MIDDLE_EDGE_LENGTH = 2.5
INNER_BOX_EDGE_LENGTH = 3.0
OTHER_EDGE_LENGTH = 1.0
CORNER_EXTRA_PERIMETER = 2.0
OUTER_MIDDLE_EXTRA_PERIMETER = 1.0


def _cell(r, c, cols):
    return r * cols + c


def make_grid(rows, cols, kind=LatticeKind.SQUARE):
    """Unit-population lattice graph"""
    if rows < 2 or cols < 2:
        raise ValueError(f"grid needs at least 2 rows and 2 columns, got {rows}x{cols}")
    kind = LatticeKind(kind)

    edges = []
    for r in range(rows):
        for c in range(cols):
            v = _cell(r, c, cols)
            if c + 1 < cols:
                edges.append((v, _cell(r, c + 1, cols)))
            if r + 1 < rows:
                edges.append((v, _cell(r + 1, c, cols)))
            # One consistent diagonal per cell
            if kind == LatticeKind.TRIANGULAR and r + 1 < rows and c + 1 < cols:
                edges.append((v, _cell(r + 1, c + 1, cols)))
    edges.sort()

    n = rows * cols
    sides = 6 if kind == LatticeKind.TRIANGULAR else 4
    degree = [0] * n
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1

    return Graph(
        populations=(1,) * n,
        edges=tuple(edges),
        areas=(1.0,) * n,
        exterior_perimeters=tuple(float(sides - degree[v]) for v in range(n)),
        shared_perimeters=(1.0,) * len(edges),
        weights=(1.0,) * len(edges),
        counties=(None,) * n,
    )


def symmetric_perimeter_grid():
    """
    4x4 grid whose compactness score is invariant under rotations and mirrors.

    Edges touching a corner cell have length 2, edges between two
    middle-of-side cells 2.5, edges inside the central 2x2 box 3, everything
    else 1. Corner cells carry 2 units of outer boundary, middle-of-side cells
    1, inner cells none.
    """
    base = make_grid(4, 4)
    corners = {0, 3, 12, 15}
    inner = {5, 6, 9, 10}
    outer_middle = set(range(16)) - corners - inner

    shared = []
    for u, v in base.edges:
        if u in corners or v in corners:
            shared.append(CORNER_EDGE_LENGTH)
        elif u in inner and v in inner:
            shared.append(INNER_BOX_EDGE_LENGTH)
        elif u in outer_middle and v in outer_middle:
            shared.append(OUTER_MIDDLE_EDGE_LENGTH)
        else:
            shared.append(OTHER_EDGE_LENGTH)

    exterior = []
    for v in range(16):
        if v in corners:
            exterior.append(CORNER_EXTRA_PERIMETER)
        elif v in outer_middle:
            exterior.append(OUTER_MIDDLE_EXTRA_PERIMETER)
        else:
            exterior.append(0.0)

    return Graph(
        populations=base.populations,
        edges=base.edges,
        areas=base.areas,
        exterior_perimeters=tuple(exterior),
        shared_perimeters=tuple(shared),
        weights=base.weights,
        counties=base.counties,
    )


def quadrant_counties(graph, rows, cols, block=2):
    """Tag lattice cells with one county per ``block`` x ``block`` square"""
    if graph.vertex_count != rows * cols:
        raise ValueError(f"graph has {graph.vertex_count} vertices, not {rows}x{cols}")
    blocks_per_row = (cols + block - 1) // block
    counties = tuple(
        f"C{(v // cols) // block * blocks_per_row + (v % cols) // block}"
        for v in range(graph.vertex_count)
    )
    return Graph(
        populations=graph.populations,
        edges=graph.edges,
        areas=graph.areas,
        exterior_perimeters=graph.exterior_perimeters,
        shared_perimeters=graph.shared_perimeters,
        weights=graph.weights,
        counties=counties,
        columns=dict(graph.columns),
    )
