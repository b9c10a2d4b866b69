# src/diagnostics/management/commands/validate.py
import logging

from django.core.management import CommandError
from rich.console import Console
from rich.table import Table

from core.commands import SamplerCommand
from core.exceptions import CycleWalkError
from diagnostics.logs import (
    apply_burn_in,
    empirical_pmf,
    observable_values,
    pmf_tv,
    read_pmf,
    read_sample_log,
)

logger = logging.getLogger("cyclewalk.diagnostics")
console = Console()

VALIDATION_FAILED = 2


class Command(SamplerCommand):
    help = "Compare the empirical pmf of sample logs with an exact pmf from enumerate"

    def add_arguments(self, parser):
        parser.add_argument("--logs", nargs="+", required=True, help="Sample log files")
        parser.add_argument("--exact", required=True, help="Exact pmf CSV written by enumerate")
        parser.add_argument("--observable", help="Observable (default: the one in --exact)")
        parser.add_argument("--tolerance", type=float, default=0.01, help="Maximum TV (default: 0.01)")
        parser.add_argument("--burn-in", type=float, default=0.0, help="Fraction of records to drop")

    def handle(self, *args, **options):
        try:
            observable, exact = read_pmf(options["exact"])
            requested = options.get("observable") or observable
            if requested != observable:
                raise CommandError(
                    f"{options['exact']} holds the '{observable}' pmf, not '{requested}'"
                )
            values = []
            for path in options["logs"]:
                _, records = read_sample_log(path)
                values.extend(observable_values(apply_burn_in(records, options["burn_in"]), observable))
            empirical = empirical_pmf(values)
        except (CycleWalkError, OSError) as e:
            logger.error(f"Validation input error: {str(e)}")
            raise CommandError(str(e))

        tv = pmf_tv(empirical, exact)

        table = Table(title=f"{observable}: empirical vs exact ({len(values)} samples)")
        table.add_column("Value")
        table.add_column("Empirical", justify="right")
        table.add_column("Exact", justify="right")
        for value in sorted(set(exact) | set(empirical), key=_sort_key):
            table.add_row(value, f"{empirical.get(value, 0.0):.5f}", f"{exact.get(value, 0.0):.5f}")
        console.print(table)

        if tv > options["tolerance"]:
            message = f"TV distance {tv:.5f} exceeds tolerance {options['tolerance']}"
            logger.error(message)
            raise CommandError(message, returncode=VALIDATION_FAILED)
        self.stdout.write(
            self.style.SUCCESS(f"TV distance {tv:.5f} within tolerance {options['tolerance']}")
        )


def _sort_key(value):
    try:
        return (0, float(value), value)
    except ValueError:
        return (1, 0.0, value)
