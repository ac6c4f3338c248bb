"""
Resource limits and complexity accounting for the reasoning stages.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict

from error_logger import ResourceBoundError, log_resource_error

logger = logging.getLogger(__name__)


def check_bound(name: str, value: int, limit: int) -> int:
    """Raise ResourceBoundError when value exceeds limit; returns value otherwise."""
    if value > limit:
        error = ResourceBoundError(name, limit, value)
        log_resource_error(error)
        raise error
    return value


class BranchBudget:
    """Counts tableau branches as they are created"""

    def __init__(self, limit: int = 10_000):
        self.limit = limit
        self.used = 0

    def charge(self, n: int = 1) -> None:
        check_bound("branches", self.used + n, self.limit)
        self.used += n

    def remaining(self) -> int:
        return self.limit - self.used


@dataclass
class ComplexityReport:
    m: int = 0              # purely universal conjuncts after splitting
    k: int = 0              # level-0 variables
    r: int = 0              # max quantifier count
    ell: int = 0            # max literals per clause
    disjunctions: int = 0   # clauses in the expansion
    leaves: int = 0         # tableau leaves
    decision_nodes: int = 0
    s: int = 0              # max matches per query literal
    h: int = 0              # query length
    stage_seconds: Dict[str, float] = field(default_factory=dict)

    @property
    def disjunction_bound(self) -> int:
        return self.m * self.k ** self.r

    @property
    def branch_bound_log2(self) -> int:
        return self.ell * self.m * self.k ** self.r

    @property
    def decision_node_bound(self) -> int:
        return sum(self.s ** i for i in range(self.h + 1))

    def violations(self) -> Dict[str, str]:
        """Bounds the measured counters break; empty when all hold."""
        out = {}
        if self.disjunctions > self.disjunction_bound:
            out["disjunctions"] = f"{self.disjunctions} > m*k^r = {self.disjunction_bound}"
        # leaves <= 2^(l*m*k^r), compared in log space
        if self.leaves > 1 and (self.leaves - 1).bit_length() > self.branch_bound_log2:
            out["leaves"] = f"{self.leaves} > 2^{self.branch_bound_log2}"
        if self.decision_nodes > self.decision_node_bound:
            out["decision_nodes"] = f"{self.decision_nodes} > {self.decision_node_bound}"
        for name, detail in out.items():
            logger.warning("complexity bound violated (%s): %s", name, detail)
        return out

    def as_dict(self) -> Dict[str, object]:
        return {
            "m": self.m, "k": self.k, "r": self.r, "ell": self.ell,
            "disjunctions": self.disjunctions, "leaves": self.leaves,
            "decision_nodes": self.decision_nodes, "s": self.s, "h": self.h,
            "disjunction_bound": self.disjunction_bound,
            "branch_bound_log2": self.branch_bound_log2,
        }
