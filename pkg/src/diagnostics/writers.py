# src/diagnostics/writers.py
"""CSV outputs, one file per diagnostic"""

from core.files import BaseTableWriter


class MarginalsWriter(BaseTableWriter):
    """``data``: per chain, a list of per-rank histograms"""

    header = ("chain", "rank", "bin_lo", "bin_hi", "probability")

    def rows(self, data):
        for chain, ranks in enumerate(data):
            for rank, hist in enumerate(ranks, start=1):
                for low, high, probability in hist.bins():
                    yield (chain, rank, low, high, f"{probability:.10g}")


class PairwiseTVWriter(BaseTableWriter):
    """``data``: mapping ``(i, j) -> tv``"""

    header = ("chain_a", "chain_b", "tv")

    def rows(self, data):
        for (i, j), tv in sorted(data.items()):
            yield (i, j, f"{tv:.10g}")


class StatisticWriter(BaseTableWriter):
    """``data``: iterable of ``(statistic, rank, value, degenerate)``"""

    header = ("statistic", "rank", "value", "degenerate")

    def rows(self, data):
        for statistic, rank, value, degenerate in data:
            yield (statistic, rank, f"{value:.10g}", int(degenerate))


class ESSWriter(BaseTableWriter):
    """``data``: iterable of ``(chain, rank, ess_steps, ess_per_two_tree_step)``"""

    header = ("chain", "rank", "ess_steps", "ess_two_tree_steps")

    def rows(self, data):
        for chain, rank, steps, two_tree in data:
            yield (chain, rank, f"{steps:.10g}", f"{two_tree:.10g}")


class ProfileWriter(BaseTableWriter):
    header = ("bin_lo", "bin_hi", "count", "frequency", "q1", "median", "q3")

    def rows(self, data):
        for b in data.bins:
            yield (b.low, b.high, b.count, f"{b.frequency:.10g}", b.q1, b.median, b.q3)


class MovedWriter(BaseTableWriter):
    header = ("moved", "count")

    def rows(self, data):
        for moved, count in data.moved.items():
            yield (moved, count)


class PmfWriter(BaseTableWriter):
    """``data``: ``(observable, pmf)`` with the pmf keyed by value"""

    header = ("observable", "value", "probability")

    def rows(self, data):
        observable, pmf = data
        for value, probability in pmf.items():
            yield (observable, value, f"{probability:.17g}")
