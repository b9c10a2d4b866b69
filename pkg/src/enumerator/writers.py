# src/enumerator/writers.py
import math

from core.files import BaseTableWriter


class PartitionTableWriter(BaseTableWriter):
    header = ("assignment", "log_trees", "j_total", "weight", "probability")

    def rows(self, data):
        for row in data:
            weight = math.exp(row.log_weight) if row.log_weight < 700 else math.inf
            yield (
                row.label,
                f"{sum(row.log_trees):.12g}",
                f"{row.j_total:.12g}",
                f"{weight:.12g}",
                f"{row.probability:.17g}",
            )
