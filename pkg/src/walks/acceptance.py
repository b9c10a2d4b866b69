# src/walks/acceptance.py
import math


def acceptance_log_ratio(proposal, spec):
    """
    log of  |adj|/|adj'| · B(B-1)/(B'(B'-1)) · (tree(ξa)tree(ξb)/tree(ξa')tree(ξb'))^γ · e^(J-J')

    Edge-weight factors cancel because proposal and measure share α, and the
    normalizer over balanced removal pairs cancels because both directions see
    the same cycle.
    """
    if proposal.identity:
        return 0.0
    if math.isinf(proposal.score_after):
        return -math.inf
    b, b_new = proposal.boundary_before, proposal.boundary_after
    log_ratio = math.log(proposal.adjacent_before) - math.log(proposal.adjacent_after)
    log_ratio += math.log(b * (b - 1)) - math.log(b_new * (b_new - 1))
    if spec.gamma != 0:
        log_ratio += spec.gamma * (proposal.log_trees_before - proposal.log_trees_after)
    log_ratio += proposal.score_before - proposal.score_after
    return log_ratio


def acceptance_probability(log_ratio):
    if log_ratio >= 0:
        return 1.0
    return math.exp(log_ratio)


def metropolis_accept(log_ratio, rng):
    """Draws from ``rng`` only when the move is not certain either way"""
    if log_ratio >= 0:
        return True
    if math.isinf(log_ratio):
        return False
    return rng.random() < math.exp(log_ratio)
