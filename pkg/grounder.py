"""
Ground expansion of purely universal conjuncts over the level-0 vocabulary.

Every universal is first split into one universal per matrix clause (keeping
only the quantified variables that clause uses) and then instantiated with
every function from its quantified variables to the level-0 variables of the
formula, repetitions included.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Tuple

from error_logger import ErrorCategory, ErrorLevel, InputError, error_logger
from setcalc import Clause, Formula, GroundLiteral, PurelyUniversal, SetVariable, instantiate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExpansionResult:
    ground: Tuple[GroundLiteral, ...]
    clauses: Tuple[Clause, ...]
    instance_counts: Tuple[Tuple[PurelyUniversal, int], ...] = field(repr=False)
    m: int
    k: int
    r: int
    ell: int
    disjunctions: int

    def header(self) -> str:
        return f"# m={self.m} k={self.k} r={self.r} l={self.ell} disjunctions={self.disjunctions}"

    def render(self) -> str:
        lines = [self.header()]
        lines += [l.render() for l in self.ground]
        lines += [c.render() for c in self.clauses]
        return "\n".join(lines)


def instances(s: PurelyUniversal, var0: Iterable[SetVariable]) -> List[Tuple[Clause, ...]]:
    """One entry per function from the quantified variables to var0."""
    domain = sorted(var0)
    clash = set(s.bound) & set(domain)
    if clash:
        raise InputError(f"quantified variables {sorted(v.name for v in clash)} are also free")
    if not domain:
        error_logger.log_error("vacuous universal: no level-0 variables to instantiate",
                               ErrorCategory.TRANSLATION, ErrorLevel.WARNING,
                               context={"origin": s.origin, "bound": [b.name for b in s.bound]})
        return []
    return [instantiate(s, values) for values in itertools.product(domain, repeat=len(s.bound))]


def expand_one(s: PurelyUniversal, var0: Iterable[SetVariable]) -> FrozenSet[Clause]:
    return frozenset(itertools.chain.from_iterable(instances(s, var0)))


def build_expansion(phi: Formula) -> ExpansionResult:
    var0 = sorted(phi.level0())
    k = len(var0)
    parts: List[PurelyUniversal] = [p for s in phi.universals for p in s.split()]

    clauses = set()
    counts = []
    for part in parts:
        made = instances(part, var0)
        counts.append((part, len(made)))
        clauses.update(itertools.chain.from_iterable(made))

    m = len(parts)
    r = max((len(p.bound) for p in parts), default=0)
    ell = max((len(c) for p in parts for c in p.matrix), default=0)
    disjunctions = sum(n for _, n in counts)
    assert disjunctions <= m * k ** r, f"expansion exceeds m*k^r: {disjunctions} > {m * k ** r}"

    result = ExpansionResult(
        ground=tuple(sorted(set(phi.ground))),
        clauses=tuple(sorted(clauses)),
        instance_counts=tuple(counts),
        m=m, k=k, r=r, ell=ell,
        disjunctions=disjunctions,
    )
    logger.info("expansion: %d ground literal(s), %d clause(s) from %d universal(s) over %d variable(s)",
                len(result.ground), len(result.clauses), m, k)
    return result
