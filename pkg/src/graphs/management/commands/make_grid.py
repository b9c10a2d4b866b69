# src/graphs/management/commands/make_grid.py
import logging

from django.core.management import CommandError

from core.commands import SamplerCommand
from core.exceptions import CycleWalkError
from graphs.lattices import make_grid, quadrant_counties, symmetric_perimeter_grid
from graphs.loaders import export_graph, write_graph_file
from graphs.models import LatticeKind
from graphs.weights import county_weighted

logger = logging.getLogger("cyclewalk.graphs")


class Command(SamplerCommand):
    help = "Emit a lattice graph file in node-link JSON"

    def add_arguments(self, parser):
        parser.add_argument("--rows", type=int, default=4, help="Lattice rows (default: 4)")
        parser.add_argument("--cols", type=int, default=4, help="Lattice columns (default: 4)")
        parser.add_argument(
            "--kind",
            choices=[k.value for k in LatticeKind],
            default=LatticeKind.SQUARE.value,
            help="Lattice kind (default: square)",
        )
        parser.add_argument(
            "--variant",
            choices=["plain", "perimeter", "weighted"],
            default="plain",
            help="plain unit grid, the symmetric 4x4 perimeter configuration, "
            "or quadrant counties with up-weighted in-county edges (default: plain)",
        )
        parser.add_argument(
            "--county-weight",
            type=float,
            default=2.0,
            help="In-county edge weight factor for the weighted variant (default: 2)",
        )
        parser.add_argument("--out", type=str, help="Output file (default: stdout)")

    def handle(self, *args, **options):
        rows, cols = options["rows"], options["cols"]
        variant = options["variant"]

        try:
            if variant == "perimeter":
                if (rows, cols) != (4, 4) or options["kind"] != LatticeKind.SQUARE:
                    raise CommandError("the perimeter variant exists only for the 4x4 square grid")
                graph = symmetric_perimeter_grid()
            else:
                graph = make_grid(rows, cols, options["kind"])
                if variant == "weighted":
                    graph = county_weighted(
                        quadrant_counties(graph, rows, cols), options["county_weight"]
                    )
        except (ValueError, CycleWalkError) as e:
            logger.error(f"Grid construction failed: {str(e)}")
            raise CommandError(str(e))

        if not options.get("out"):
            self.stdout.write(export_graph(graph))
            return

        try:
            path = write_graph_file(graph, options["out"])
        except OSError as e:
            raise CommandError(f"Cannot write {options['out']}: {str(e)}")

        self.stdout.write(
            self.style.SUCCESS(
                f"Wrote {rows}x{cols} {options['kind']} grid ({variant}) with "
                f"{graph.vertex_count} vertices and {graph.edge_count} edges to {path}"
            )
        )
