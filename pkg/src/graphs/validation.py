# src/graphs/validation.py
"""
Graph invariant checks. Violations are returned as data, never raised.
"""


def validate(graph):
    """Return one description per violated invariant (empty when valid)"""
    violations = []
    n = graph.vertex_count

    lengths = {
        "areas": len(graph.areas),
        "exterior_perimeters": len(graph.exterior_perimeters),
        "counties": len(graph.counties),
    }
    for name, length in lengths.items():
        if length != n:
            violations.append(f"{name} has {length} entries for {n} vertices")
    for name in ("weights", "shared_perimeters"):
        length = len(getattr(graph, name))
        if length != graph.edge_count:
            violations.append(f"{name} has {length} entries for {graph.edge_count} edges")
    for name, values in graph.columns.items():
        if len(values) != n:
            violations.append(f"column '{name}' has {len(values)} entries for {n} vertices")
    if violations:
        return violations

    seen = set()
    for eid, (u, v) in enumerate(graph.edges):
        if not (0 <= u < n and 0 <= v < n):
            violations.append(f"edge {eid} ({u}-{v}) references a missing vertex")
            continue
        if u == v:
            violations.append(f"self-loop at vertex {u}")
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            violations.append(f"parallel edge {key[0]}-{key[1]}")
        seen.add(key)
        if not graph.weights[eid] > 0:
            violations.append(f"edge {u}-{v} has non-positive weight {graph.weights[eid]}")
        if graph.shared_perimeters[eid] < 0:
            violations.append(
                f"edge {u}-{v} has negative shared perimeter {graph.shared_perimeters[eid]}"
            )

    for v in range(n):
        if graph.populations[v] < 0:
            violations.append(f"vertex {v} has negative population {graph.populations[v]}")
        if graph.areas[v] < 0:
            violations.append(f"vertex {v} has negative area {graph.areas[v]}")
        if graph.exterior_perimeters[v] < 0:
            violations.append(
                f"vertex {v} has negative exterior perimeter {graph.exterior_perimeters[v]}"
            )

    if graph.total_population <= 0:
        violations.append("total population is not positive")

    if n:
        parts = graph.components()
        if len(parts) > 1:
            sizes = sorted((len(p) for p in parts), reverse=True)
            violations.append(f"disconnected: {len(parts)} components of sizes {sizes}")

    return violations
