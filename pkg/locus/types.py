from enum import Enum


class Verdict(str, Enum):
    """Outcome attached to a certified claim.

    Values are ordered from strongest to weakest; ``REFUTED`` is the only
    verdict that makes ``certify`` exit non-zero.
    """

    STRONGLY_OPTIMAL = "strongly-optimal"
    OPTIMAL = "optimal"
    CONSISTENT = "consistent"
    INTERVAL = "interval"
    NOT_CERTIFIED = "not-certified"
    BUDGET_EXCEEDED = "budget-exceeded"
    FLAGGED = "flagged"
    REFUTED = "refuted"


class Outcome(str, Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    BUDGET_EXCEEDED = "budget-exceeded"


class JobKind(str, Enum):
    HLRC = "hlrc"
    HLRC_UNBOUNDED = "hlrc-unbounded"
    CONV = "conv"
    BICYCLIC = "bicyclic"
