# src/walks/proposals.py
from dataclasses import dataclass, field
from enum import StrEnum


class StepKind(StrEnum):
    ONE_TREE = "one_tree"
    TWO_TREE = "two_tree"


@dataclass
class Proposal2Tree:
    """
    Everything the Metropolis-Hastings ratio of a 2-tree move needs.

    ``new_members`` maps both labels of ``pair`` to their proposed vertex sets.
    Scores are total J over all districts; tree terms are summed over the pair.
    """

    pair: tuple
    added: tuple
    removal: tuple
    cycle_length: int
    new_members: dict
    boundary_before: int
    boundary_after: int
    adjacent_before: int
    adjacent_after: int
    score_before: float
    score_after: float
    log_trees_before: float = 0.0
    log_trees_after: float = 0.0
    new_log_trees: dict | None = None
    pop_change: float = 0.0
    moved: int = 0
    identity: bool = False
    log_ratio: float = 0.0


@dataclass
class StepOutcome:
    kind: StepKind
    accepted: bool
    changed: bool = False
    acceptance: float | None = None
    pop_change: float | None = None
    moved: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def proposed(self):
        """True when a 2-tree move reached the acceptance test"""
        return self.pop_change is not None

    def as_record(self, step):
        return {
            "step": step,
            "accepted": self.accepted,
            "acceptance": self.acceptance,
            "pop_change": self.pop_change,
            "moved": self.moved,
        }
