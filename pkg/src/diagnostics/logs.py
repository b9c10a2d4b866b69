# src/diagnostics/logs.py
"""Readers for sample logs and their proposal sidecars"""

import math
from collections import Counter
from pathlib import Path

from core.exceptions import DiagnosticsError
from core.files import read_ndjson, read_table

SCALAR_OBSERVABLES = ("cut_edges", "county_splits", "log_trees")


def read_sample_log(path):
    """``(config, records)``; the config comes from the initial record"""
    records = list(read_ndjson(path))
    if not records:
        raise DiagnosticsError(f"{path}: empty sample log")
    config = records[0].get("config")
    if config is None:
        raise DiagnosticsError(f"{path}: first record carries no config")
    return config, records


def proposals_path_for(log_path):
    log_path = Path(log_path)
    return log_path.with_name(log_path.name.replace(".jsonl", ".proposals.jsonl"))


def read_proposals(log_path):
    path = proposals_path_for(log_path)
    if not path.exists():
        return None
    return list(read_ndjson(path))


def apply_burn_in(records, burn_in):
    if not 0 <= burn_in < 1:
        raise DiagnosticsError(f"burn-in fraction must lie in [0, 1), got {burn_in}")
    return records[math.floor(burn_in * len(records)) :]


def observable_values(records, observable):
    """
    Values of ``observable`` per record. ``score_breakdown.j_total`` style
    names reach into nested fields.
    """
    name, _, part = observable.partition(".")
    values = []
    for number, record in enumerate(records):
        if name not in record:
            raise DiagnosticsError(f"record {number} has no '{name}' observable")
        value = record[name]
        if part:
            value = value[part]
        values.append(value)
    return values


def district_vectors(records, observable):
    """Per-record district vectors; scalars become one-element vectors"""
    return [v if isinstance(v, list) else [v] for v in observable_values(records, observable)]


def empirical_pmf(values):
    """Relative frequency of each distinct value, keyed by its string form"""
    counts = Counter(str(value) for value in values)
    total = sum(counts.values())
    if not total:
        raise DiagnosticsError("no values to build a pmf from")
    return {value: count / total for value, count in sorted(counts.items())}


def pmf_tv(first, second):
    """TV distance between two pmfs over the union of their supports"""
    support = set(first) | set(second)
    return 0.5 * sum(abs(first.get(v, 0.0) - second.get(v, 0.0)) for v in support)


def read_pmf(path):
    """``(observable, pmf)`` from a CSV written by PmfWriter"""
    rows = read_table(path)
    if not rows:
        raise DiagnosticsError(f"{path}: empty pmf table")
    observables = {row["observable"] for row in rows}
    if len(observables) != 1:
        raise DiagnosticsError(f"{path}: mixes observables {sorted(observables)}")
    try:
        pmf = {row["value"]: float(row["probability"]) for row in rows}
    except (KeyError, ValueError) as e:
        raise DiagnosticsError(f"{path}: malformed pmf table ({str(e)})")
    return observables.pop(), pmf
