# src/enumerator/management/commands/enumerate.py
import logging
from pathlib import Path

from django.core.management import CommandError
from rich.console import Console
from rich.table import Table

from chains.config import build_config, load_run_config
from chains.runner import load_run_graph
from core.commands import SamplerCommand
from core.exceptions import CycleWalkError
from diagnostics.writers import PmfWriter
from enumerator.exact import PUSHFORWARDS, exact_partition_distribution, exact_pushforward
from enumerator.partitions import enumerate_partitions
from enumerator.writers import PartitionTableWriter

logger = logging.getLogger("cyclewalk.enumerator")
console = Console()


class Command(SamplerCommand):
    help = "Enumerate balanced partitions of a small graph and write exact pmfs"

    def add_arguments(self, parser):
        parser.add_argument("--config", type=str, help="Run file (TOML or JSON)")
        parser.add_argument("--graph", type=str, help="Graph file (overrides the run file)")
        parser.add_argument("--districts", type=int, help="Number of districts")
        parser.add_argument("--gamma", type=float, help="Tree-count exponent")
        parser.add_argument("--pop-tol", type=float, help="Population tolerance fraction")
        parser.add_argument("--out", type=str, help="Output directory")
        parser.add_argument("--observables", type=str, help="Comma-separated pushforwards")
        parser.add_argument("--guard", type=int, help="Maximum vertex count")

    def handle(self, *args, **options):
        overrides = {
            "graph": options.get("graph"),
            "districts": options.get("districts"),
            "gamma": options.get("gamma"),
            "pop_tol": options.get("pop_tol"),
        }
        try:
            if options.get("config"):
                cfg = load_run_config(options["config"], overrides)
            else:
                cfg = build_config({}, base_dir=Path.cwd(), overrides=overrides)
            graph = load_run_graph(cfg)
        except (CycleWalkError, OSError) as e:
            logger.error(f"Enumeration setup failed: {str(e)}")
            raise CommandError(str(e))

        if options.get("observables"):
            observables = [o.strip() for o in options["observables"].split(",") if o.strip()]
        else:
            observables = list(cfg.enumeration.get("observables", ["cut_edges"]))
        unknown = set(observables) - set(PUSHFORWARDS)
        if unknown:
            raise CommandError(f"Unknown pushforward observables {sorted(unknown)}")
        out_dir = Path(
            options.get("out") or cfg.enumeration.get("out") or Path(cfg.out) / "enumeration"
        )

        try:
            assignments = enumerate_partitions(
                graph, cfg.districts, cfg.bounds(graph), guard=options.get("guard")
            )
            if not assignments:
                raise CommandError("No balanced connected partition exists for these bounds")
            table = exact_partition_distribution(graph, assignments, cfg.measure)
            pmfs = {name: exact_pushforward(table, name, graph) for name in observables}
        except CycleWalkError as e:
            logger.error(f"Enumeration failed: {str(e)}")
            raise CommandError(str(e))

        results = [PartitionTableWriter(out_dir / "partitions.csv").write(table)]
        for name, pmf in pmfs.items():
            results.append(PmfWriter(out_dir / f"pmf_{name}.csv").write((name, pmf)))
        failed = [result for result in results if not result["success"]]
        if failed:
            raise CommandError(f"Could not write outputs: {failed[0]['error']}")

        for name, pmf in pmfs.items():
            pmf_table = Table(title=f"Exact pmf of {name}")
            pmf_table.add_column("Value")
            pmf_table.add_column("Probability", justify="right")
            for value, probability in pmf.items():
                pmf_table.add_row(value, f"{probability:.6f}")
            console.print(pmf_table)
        self.stdout.write(
            self.style.SUCCESS(f"Enumerated {len(table)} partitions; tables in {out_dir}")
        )
