# src/energy/measures.py
import math
from dataclasses import asdict, dataclass
from enum import StrEnum

from core.exceptions import ConfigError


class PopulationMode(StrEnum):
    HARD = "hard"
    SOFT = "soft"
    MIXED = "mixed"


@dataclass(frozen=True)
class MeasureSpec:
    """
    Parameters of the target measure on spanning forests.

    ``pop_tolerance`` is the hard gate δ used by the hard and mixed population
    modes; ``None`` leaves the gate to the population bounds alone.
    ``weighted`` switches edge weights on as α (= β) everywhere.
    """

    gamma: float = 0.0
    w_compact: float = 0.0
    population_mode: PopulationMode = PopulationMode.HARD
    pop_tolerance: float | None = None
    w_pop: float = 0.0
    weighted: bool = False
    county_weight: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "population_mode", PopulationMode(self.population_mode))
        if not math.isfinite(self.gamma):
            raise ConfigError("measure.gamma", f"must be finite, got {self.gamma}")
        if self.w_compact < 0:
            raise ConfigError("measure.w_compact", f"must be >= 0, got {self.w_compact}")
        if self.w_pop < 0:
            raise ConfigError("measure.w_pop", f"must be >= 0, got {self.w_pop}")
        if self.county_weight is not None and self.county_weight <= 0:
            raise ConfigError(
                "measure.county_weight", f"must be > 0, got {self.county_weight}"
            )
        if self.pop_tolerance is not None and self.pop_tolerance < 0:
            raise ConfigError(
                "measure.pop_tolerance", f"must be >= 0, got {self.pop_tolerance}"
            )

    @classmethod
    def from_mapping(cls, mapping):
        mapping = dict(mapping or {})
        known = {
            "gamma",
            "w_compact",
            "population_mode",
            "pop_tolerance",
            "w_pop",
            "weighted",
            "county_weight",
        }
        unknown = set(mapping) - known
        if unknown:
            raise ConfigError("measure", f"unknown keys {sorted(unknown)}")
        try:
            return cls(
                gamma=float(mapping.get("gamma", 0.0)),
                w_compact=float(mapping.get("w_compact", 0.0)),
                population_mode=mapping.get("population_mode", PopulationMode.HARD),
                pop_tolerance=(
                    None
                    if mapping.get("pop_tolerance") is None
                    else float(mapping["pop_tolerance"])
                ),
                w_pop=float(mapping.get("w_pop", 0.0)),
                weighted=bool(mapping.get("weighted", False)),
                county_weight=(
                    None
                    if mapping.get("county_weight") is None
                    else float(mapping["county_weight"])
                ),
            )
        except ValueError as e:
            raise ConfigError("measure", str(e))

    def as_dict(self):
        data = asdict(self)
        data["population_mode"] = str(self.population_mode)
        return data


@dataclass(frozen=True)
class ScoreBreakdown:
    j_population: float
    j_compact: float
    log_trees: float
    j_total: float

    def as_record(self):
        def finite(value):
            return value if math.isfinite(value) else None

        return {
            "j_pop": finite(self.j_population),
            "j_compact": finite(self.j_compact),
            "log_trees": finite(self.log_trees),
            "j_total": finite(self.j_total),
        }
