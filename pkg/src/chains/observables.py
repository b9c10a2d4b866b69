# src/chains/observables.py
from core.exceptions import ConfigError
from energy.scores import isoperimetric_ratios, score_breakdown


def _labels(state):
    return range(1, state.districts + 1)


def vote_shares(state, dem, rep):
    """Per-district dem / (dem + rep) over summed vertex votes; None without votes"""
    columns = state.graph.columns
    for column in (dem, rep):
        if column not in columns:
            raise ConfigError("votes", f"graph has no numeric column '{column}'")
    shares = []
    for label in _labels(state):
        members = state.members[label]
        d = sum(columns[dem][v] for v in members)
        r = sum(columns[rep][v] for v in members)
        shares.append(d / (d + r) if d + r > 0 else None)
    return shares


def extract_observables(state, requested, spec=None, votes=None):
    """Record fields for the requested observables, districts in label order"""
    fields = {}
    for name in requested:
        if name == "populations":
            fields[name] = [state.populations[label] for label in _labels(state)]
        elif name == "cut_edges":
            fields[name] = state.cut_edge_count()
        elif name == "isoperimetric":
            ratios = isoperimetric_ratios(state)
            fields[name] = [ratios[label] for label in _labels(state)]
        elif name == "vote_shares":
            votes = votes or {}
            fields[name] = vote_shares(state, votes.get("dem"), votes.get("rep"))
        elif name == "county_splits":
            fields[name] = state.county_split_count()
        elif name == "score_breakdown":
            if spec is None:
                raise ConfigError("observables", "score_breakdown needs a measure")
            fields[name] = score_breakdown(state, spec).as_record()
        elif name == "log_trees":
            fields[name] = sum(state.log_tree_count(label) for label in _labels(state))
        elif name == "assignment":
            fields[name] = list(state.assignment)
        else:
            raise ConfigError("observables", f"unknown observable '{name}'")
    return fields
