# src/chains/config.py
"""
Run configuration.

A run file is TOML (JSON with the same structure is accepted). Relative graph
paths resolve against the directory of the run file. Command-line overrides
are applied on top of the file before validation.
"""

import dataclasses
import json
import tomllib
from dataclasses import dataclass, field
from pathlib import Path

from django.conf import settings

from core.exceptions import ConfigError
from energy.measures import MeasureSpec, PopulationMode
from forests.seeding import TREE_SAMPLERS
from forests.state import PopBounds
from graphs.models import GraphKeys

OBSERVABLES = (
    "populations",
    "cut_edges",
    "isoperimetric",
    "vote_shares",
    "county_splits",
    "score_breakdown",
    "log_trees",
    "assignment",
)

DEFAULT_OBSERVABLES = ("populations", "cut_edges")


@dataclass(frozen=True)
class ChainConfig:
    graph: str
    districts: int
    steps: int = 0
    seed: int = 0
    chains: int = 1
    chain_index: int = 0
    p_two_tree: float = 0.1
    cadence: int = 1
    out: str = "runs"
    observables: tuple = DEFAULT_OBSERVABLES
    seeding: str = "ust"
    audit_every: int = 0
    record_proposals: bool = True
    population: dict = field(default_factory=dict)
    measure: MeasureSpec = field(default_factory=MeasureSpec)
    graph_keys: GraphKeys = field(default_factory=GraphKeys)
    votes: dict = field(default_factory=dict)
    enumeration: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.districts < 1:
            raise ConfigError("districts", f"must be >= 1, got {self.districts}")
        if self.steps < 0:
            raise ConfigError("steps", f"must be >= 0, got {self.steps}")
        if self.chains < 1:
            raise ConfigError("chains", f"must be >= 1, got {self.chains}")
        if not 0 < self.p_two_tree <= 1:
            raise ConfigError("p_two_tree", f"must lie in (0, 1], got {self.p_two_tree}")
        if self.cadence < 1:
            raise ConfigError("cadence", f"must be >= 1, got {self.cadence}")
        if self.audit_every < 0:
            raise ConfigError("audit_every", f"must be >= 0, got {self.audit_every}")
        if self.seeding not in TREE_SAMPLERS:
            raise ConfigError("seeding", f"unknown tree sampler '{self.seeding}'")
        unknown = set(self.observables) - set(OBSERVABLES)
        if unknown:
            raise ConfigError("observables", f"unknown observables {sorted(unknown)}")
        if "vote_shares" in self.observables and not {"dem", "rep"} <= set(self.votes):
            raise ConfigError("votes", "vote_shares needs both 'dem' and 'rep' columns")
        population = self.population
        if "tolerance" in population and ("min" in population or "max" in population):
            raise ConfigError("population", "give either tolerance or min/max, not both")
        if ("min" in population) != ("max" in population):
            raise ConfigError("population", "min and max must be given together")
        if population.get("tolerance", 0) < 0:
            raise ConfigError("population.tolerance", "must be >= 0")

    def bounds(self, graph):
        """
        Population window for this run on ``graph``.

        In hard and mixed mode a ``measure.pop_tolerance`` gate narrows the
        ``[population]`` window, so the seeder and the cut search never reach
        a plan the measure scores as infeasible.
        """
        total = graph.total_population
        if "tolerance" in self.population:
            bounds = PopBounds.from_tolerance(total, self.districts, self.population["tolerance"])
        elif "min" in self.population:
            bounds = PopBounds.explicit(
                total, self.districts, self.population["min"], self.population["max"]
            )
        else:
            bounds = PopBounds.unbounded(total, self.districts)

        measure = self.measure
        gated = measure.population_mode in (PopulationMode.HARD, PopulationMode.MIXED)
        if gated and measure.pop_tolerance is not None:
            gate = PopBounds.from_tolerance(total, self.districts, measure.pop_tolerance)
            bounds = bounds.intersect(gate)
            if not bounds.supports(total, self.districts):
                raise ConfigError(
                    "measure.pop_tolerance",
                    f"gate {measure.pop_tolerance} leaves no room for {self.districts} "
                    f"districts inside the population window [{gate.lower}, {gate.upper}]",
                )
        return bounds

    def for_chain(self, index):
        """Copy for chain ``index`` of the launch"""
        return dataclasses.replace(self, chain_index=index)

    @property
    def log_name(self):
        return f"chain_{self.chain_index:03d}.jsonl"

    @property
    def proposals_name(self):
        return f"chain_{self.chain_index:03d}.proposals.jsonl"

    def as_dict(self):
        return {
            "graph": self.graph,
            "districts": self.districts,
            "steps": self.steps,
            "seed": self.seed,
            "chains": self.chains,
            "chain_index": self.chain_index,
            "p_two_tree": self.p_two_tree,
            "cadence": self.cadence,
            "out": self.out,
            "observables": list(self.observables),
            "seeding": self.seeding,
            "audit_every": self.audit_every,
            "record_proposals": self.record_proposals,
            "population": dict(self.population),
            "measure": self.measure.as_dict(),
            "graph_keys": dataclasses.asdict(self.graph_keys),
            "votes": dict(self.votes),
            "enumeration": dict(self.enumeration),
        }


TOP_LEVEL_KEYS = {
    "graph",
    "districts",
    "steps",
    "seed",
    "chains",
    "p_two_tree",
    "cadence",
    "out",
    "observables",
    "seeding",
    "audit_every",
    "record_proposals",
    "population",
    "measure",
    "graph_keys",
    "votes",
    "enumeration",
}


def read_config_file(path):
    """Raw mapping from a TOML or JSON run file"""
    path = Path(path)
    try:
        if path.suffix == ".json":
            return json.loads(path.read_text(encoding="utf-8"))
        with open(path, "rb") as handle:
            return tomllib.load(handle)
    except OSError as e:
        raise ConfigError("config", f"cannot read {path}: {str(e)}")
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as e:
        raise ConfigError("config", f"{path} is not valid: {str(e)}")


def _apply_overrides(raw, overrides):
    """Fold flat command-line overrides into the nested mapping"""
    raw = dict(raw)
    raw["population"] = dict(raw.get("population", {}))
    raw["measure"] = dict(raw.get("measure", {}))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == "gamma":
            raw["measure"]["gamma"] = value
        elif key == "pop_tol":
            raw["population"].pop("min", None)
            raw["population"].pop("max", None)
            raw["population"]["tolerance"] = value
        elif key == "observables" and isinstance(value, str):
            raw["observables"] = [name.strip() for name in value.split(",") if name.strip()]
        else:
            raw[key] = value
    return raw


def build_config(raw, base_dir=None, overrides=None):
    raw = _apply_overrides(raw, overrides)
    unknown = set(raw) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError("config", f"unknown keys {sorted(unknown)}")
    for required in ("graph", "districts"):
        if required not in raw:
            raise ConfigError(required, "is required")

    graph_path = Path(raw["graph"])
    if not graph_path.is_absolute() and base_dir is not None:
        graph_path = Path(base_dir) / graph_path

    options = getattr(settings, "CYCLEWALK", {})
    try:
        return ChainConfig(
            graph=str(graph_path),
            districts=int(raw["districts"]),
            steps=int(raw.get("steps", 0)),
            seed=int(raw.get("seed", 0)),
            chains=int(raw.get("chains", 1)),
            p_two_tree=float(raw.get("p_two_tree", 0.1)),
            cadence=int(raw.get("cadence", 1)),
            out=str(raw.get("out", options.get("OUTPUT_DIR", "runs"))),
            observables=tuple(raw.get("observables", DEFAULT_OBSERVABLES)),
            seeding=str(raw.get("seeding", "ust")),
            audit_every=int(raw.get("audit_every", options.get("AUDIT_EVERY", 0))),
            record_proposals=bool(raw.get("record_proposals", True)),
            population=dict(raw["population"]),
            measure=MeasureSpec.from_mapping(raw["measure"]),
            graph_keys=GraphKeys.from_mapping(raw.get("graph_keys", {})),
            votes=dict(raw.get("votes", {})),
            enumeration=dict(raw.get("enumeration", {})),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError("config", str(e))


def load_run_config(path, overrides=None):
    """Resolved ChainConfig from a run file plus flat overrides"""
    path = Path(path)
    return build_config(read_config_file(path), base_dir=path.parent, overrides=overrides)
