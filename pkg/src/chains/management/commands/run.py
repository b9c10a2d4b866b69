# src/chains/management/commands/run.py
import logging
from pathlib import Path

from django.core.management import CommandError
from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn

from chains.config import build_config, load_run_config
from chains.manifest import RunManifest
from chains.runner import load_run_graph, run_many
from core.commands import SamplerCommand
from core.exceptions import CycleWalkError
from graphs.validation import validate

logger = logging.getLogger("cyclewalk.chains")
console = Console()


class Command(SamplerCommand):
    help = "Run independent cycle walk chains and write one sample log per chain"

    def add_arguments(self, parser):
        parser.add_argument("--config", type=str, help="Run file (TOML or JSON)")
        parser.add_argument("--graph", type=str, help="Graph file (overrides the run file)")
        parser.add_argument("--districts", type=int, help="Number of districts")
        parser.add_argument("--gamma", type=float, help="Tree-count exponent")
        parser.add_argument("--pop-tol", type=float, help="Population tolerance fraction")
        parser.add_argument("--p2tree", type=float, help="Probability of a 2-tree step")
        parser.add_argument("--steps", type=int, help="Proposals per chain")
        parser.add_argument("--chains", type=int, help="Number of chains")
        parser.add_argument("--seed", type=int, help="Base seed")
        parser.add_argument("--out", type=str, help="Output directory")
        parser.add_argument("--observables", type=str, help="Comma-separated observables")
        parser.add_argument("--workers", type=int, help="Worker processes (default: CPU count)")
        parser.add_argument("--quiet", action="store_true", help="No progress display")

    def handle(self, *args, **options):
        overrides = {
            "graph": options.get("graph"),
            "districts": options.get("districts"),
            "gamma": options.get("gamma"),
            "pop_tol": options.get("pop_tol"),
            "p_two_tree": options.get("p2tree"),
            "steps": options.get("steps"),
            "chains": options.get("chains"),
            "seed": options.get("seed"),
            "out": options.get("out"),
            "observables": options.get("observables"),
        }
        try:
            if options.get("config"):
                cfg = load_run_config(options["config"], overrides)
            else:
                cfg = build_config({}, base_dir=Path.cwd(), overrides=overrides)
            graph = load_run_graph(cfg)
        except (CycleWalkError, OSError) as e:
            logger.error(f"Run setup failed: {str(e)}")
            raise CommandError(str(e))

        violations = validate(graph)
        if violations:
            raise CommandError(f"{cfg.graph} is not a valid graph: {'; '.join(violations)}")

        configs = [cfg.for_chain(index) for index in range(cfg.chains)]
        try:
            manifest_path = RunManifest.for_launch(configs).write()
        except OSError as e:
            raise CommandError(f"Cannot write manifest: {str(e)}")

        try:
            if options.get("quiet") or cfg.steps == 0:
                results = run_many(graph, configs, options.get("workers"))
            else:
                results = self._run_with_progress(graph, configs, options.get("workers"))
        except (CycleWalkError, OSError) as e:
            logger.error(f"Run failed: {str(e)}")
            raise CommandError(str(e))

        for result in results:
            self.stdout.write(
                f"chain {result.chain_index}: {result.records} records, "
                f"2-tree acceptance {result.two_tree_accepted}/{result.two_tree_steps} "
                f"-> {result.log_path}"
            )
        self.stdout.write(
            self.style.SUCCESS(f"Finished {len(results)} chain(s); manifest at {manifest_path}")
        )

    def _run_with_progress(self, graph, configs, workers):
        with Progress(
            TextColumn("[bold]chain {task.fields[chain]}"),
            BarColumn(),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
            console=console,
        ) as progress:
            tasks = {
                cfg.chain_index: progress.add_task("run", total=cfg.steps, chain=cfg.chain_index)
                for cfg in configs
            }

            def advance(chain_index, step):
                progress.update(tasks[chain_index], completed=step)

            return run_many(graph, configs, workers, on_progress=advance)
