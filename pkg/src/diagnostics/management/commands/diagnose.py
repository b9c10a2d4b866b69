# src/diagnostics/management/commands/diagnose.py
import logging
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.management import CommandError
from rich.console import Console
from rich.table import Table

from core.commands import SamplerCommand
from core.exceptions import CycleWalkError
from diagnostics.convergence import ess_per_two_tree_step, ess_steps, gelman_rubin_by_rank
from diagnostics.histograms import integer_edges, max_pairwise_tv, pairwise_tv, uniform_edges
from diagnostics.logs import (
    apply_burn_in,
    district_vectors,
    read_proposals,
    read_sample_log,
)
from diagnostics.marginals import order_statistics, ranked_marginals
from diagnostics.profiles import proposal_profiles
from diagnostics.writers import (
    ESSWriter,
    MarginalsWriter,
    MovedWriter,
    PairwiseTVWriter,
    ProfileWriter,
    StatisticWriter,
)

logger = logging.getLogger("cyclewalk.diagnostics")
console = Console()


class Command(SamplerCommand):
    help = "Compute ranked marginals, pairwise TV, Gelman-Rubin, ESS and proposal profiles"

    def add_arguments(self, parser):
        parser.add_argument("logs", nargs="+", type=str, help="Sample log files")
        parser.add_argument("--observable", default="cut_edges", help="Observable (default: cut_edges)")
        parser.add_argument("--bins", type=int, help="Uniform bins (default: CYCLEWALK DEFAULT_BINS)")
        parser.add_argument("--range", type=str, help="Histogram range 'lo,hi' for uniform bins")
        parser.add_argument("--burn-in", type=float, default=0.0, help="Fraction of records to drop")
        parser.add_argument("--out", type=str, default="diagnostics", help="Output directory")
        parser.add_argument("--marginals", action="store_true", help="Ranked marginals")
        parser.add_argument("--tv", action="store_true", help="Pairwise TV distance")
        parser.add_argument("--gelman-rubin", action="store_true", help="Gelman-Rubin R-hat")
        parser.add_argument("--ess", action="store_true", help="Effective sample rate")
        parser.add_argument("--profiles", action="store_true", help="Proposal profiles")
        parser.add_argument("--p2tree", type=float, help="p_two_tree for ESS re-expression")

    def handle(self, *args, **options):
        selected = {
            name
            for name in ("marginals", "tv", "gelman_rubin", "ess", "profiles")
            if options.get(name)
        } or {"marginals", "tv", "gelman_rubin", "ess", "profiles"}
        out_dir = Path(options["out"])
        observable = options["observable"]

        try:
            logs = [read_sample_log(path) for path in options["logs"]]
            ordered = [
                order_statistics(
                    district_vectors(apply_burn_in(records, options["burn_in"]), observable)
                )
                for _, records in logs
            ]
            edges = self._edges(ordered, options)
            summary = []
            written = []

            histograms = [ranked_marginals(o, edges) for o in ordered]
            if "marginals" in selected:
                written.append(MarginalsWriter(out_dir / "marginals.csv").write(histograms))

            if len(logs) >= 2 and "tv" in selected:
                distances = pairwise_tv(histograms)
                written.append(PairwiseTVWriter(out_dir / "pairwise_tv.csv").write(distances))
                summary.append(("max pairwise TV", f"{max_pairwise_tv(histograms):.6f}"))

            if len(logs) >= 2 and "gelman_rubin" in selected:
                rhats = gelman_rubin_by_rank(ordered)
                written.append(
                    StatisticWriter(out_dir / "gelman_rubin.csv").write(
                        ("gelman_rubin", rank, rhat.value, rhat.degenerate)
                        for rank, rhat in enumerate(rhats, start=1)
                    )
                )
                summary.append(("max R-hat", f"{max(r.value for r in rhats):.6f}"))
                degenerate = [rank for rank, r in enumerate(rhats, start=1) if r.degenerate]
                if degenerate:
                    summary.append(("degenerate R-hat ranks", ", ".join(map(str, degenerate))))

            if "ess" in selected:
                rows = []
                for chain, ((config, _), o) in enumerate(zip(logs, ordered)):
                    p_two_tree = options.get("p2tree") or config.get("p_two_tree", 1.0)
                    cadence = config.get("cadence", 1)
                    for rank in range(o.shape[1]):
                        steps = ess_steps(o[:, rank]) * cadence
                        rows.append((chain, rank + 1, steps, ess_per_two_tree_step(steps, p_two_tree)))
                written.append(ESSWriter(out_dir / "ess.csv").write(rows))
                summary.append(("max ESS steps", f"{max(r[2] for r in rows):.3f}"))

            if "profiles" in selected:
                records = []
                for path in options["logs"]:
                    proposals = read_proposals(path)
                    if proposals is None:
                        logger.warning(f"No proposal sidecar next to {path}")
                        continue
                    records.extend(proposals)
                if records:
                    profile = proposal_profiles(records)
                    written.append(ProfileWriter(out_dir / "acceptance_profile.csv").write(profile))
                    written.append(MovedWriter(out_dir / "nodes_moved.csv").write(profile))
                    summary.append(("2-tree proposals", str(profile.proposals)))
        except (CycleWalkError, OSError) as e:
            logger.error(f"Diagnostics failed: {str(e)}")
            raise CommandError(str(e))

        failed = [result for result in written if not result["success"]]
        if failed:
            raise CommandError(f"Could not write outputs: {failed[0]['error']}")

        table = Table(title=f"Diagnostics for {observable} ({len(logs)} chain(s))")
        table.add_column("Statistic")
        table.add_column("Value", justify="right")
        for name, value in summary:
            table.add_row(name, value)
        console.print(table)
        for result in written:
            self.stdout.write(f"{result['rows']} rows -> {result['file_path']}")
        self.stdout.write(self.style.SUCCESS(f"Diagnostics written to {out_dir}"))

    def _edges(self, ordered, options):
        pooled = np.concatenate([o.ravel() for o in ordered])
        if options.get("range"):
            try:
                low, high = (float(x) for x in options["range"].split(","))
            except ValueError:
                raise CommandError(f"--range must look like 'lo,hi', got {options['range']!r}")
            bins = options.get("bins") or settings.CYCLEWALK["DEFAULT_BINS"]
            return uniform_edges(bins, low, high)
        if np.all(pooled == np.round(pooled)) and not options.get("bins"):
            return integer_edges(pooled.min(), pooled.max())
        bins = options.get("bins") or settings.CYCLEWALK["DEFAULT_BINS"]
        low, high = float(pooled.min()), float(pooled.max())
        if low == high:
            high = low + 1.0
        return uniform_edges(bins, low, high)
