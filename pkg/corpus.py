"""
Seeded generators of small knowledge bases and queries.

Sizes stay within desk scale so the brute-force oracle can cross-check the
tableau: at most 4 individuals, 3 concept names, 2 abstract roles, one
concrete role over one datatype with at most 2 constants, and 6 axioms.
"""

from __future__ import annotations

import random
from typing import Callable, List, Optional, Sequence

from kb_model import (
    ConceptAnd,
    ConceptAssertion,
    ConceptEquivalence,
    ConceptInclusion,
    ConceptName,
    ConceptNot,
    ConceptOr,
    ConcreteRoleAssertion,
    ConcreteRoleName,
    Constant,
    DatatypeMap,
    EqualityAssertion,
    ExistsInclusion,
    ForAllInclusion,
    KnowledgeBase,
    Nominal,
    RoleAssertion,
    RoleCharacteristic,
    RoleInclusion,
    RoleName,
    RoleProperty,
    Statement,
    signature,
)
from query_model import (
    ConceptAtom,
    EqualityAtom,
    HOLiteral,
    HOQuery,
    QueryVariable,
    RoleAtom,
    VariableSort,
    data_positions,
)

INDIVIDUALS = ("a", "b", "c", "d")
CONCEPTS = ("A", "B", "C")
ROLES = ("R", "S")
CONCRETE = "P"
DATATYPE = "num"
VALUES = ("1", "2")


class CorpusLimits:
    def __init__(self, individuals: int = 4, concepts: int = 3, roles: int = 2,
                 axioms: int = 6, constants: int = 2, concrete: bool = True):
        self.individuals = INDIVIDUALS[:max(1, min(individuals, 4))]
        self.concepts = CONCEPTS[:max(1, min(concepts, 3))]
        self.roles = ROLES[:max(1, min(roles, 2))]
        self.axioms = max(1, min(axioms, 6))
        self.constants = tuple(Constant(v, DATATYPE) for v in VALUES[:max(1, min(constants, 2))])
        self.concrete = concrete


def _concept(rng: random.Random, lim: CorpusLimits):
    name = ConceptName(rng.choice(lim.concepts))
    return ConceptNot(name) if rng.random() < 0.25 else name


def _pair(rng: random.Random, lim: CorpusLimits):
    return ConceptName(rng.choice(lim.concepts)), ConceptName(rng.choice(lim.concepts))


def random_statement(rng: random.Random, lim: CorpusLimits) -> Statement:
    ind = lambda: rng.choice(lim.individuals)
    role = lambda: RoleName(rng.choice(lim.roles))
    makers: List[Callable[[], Statement]] = [
        lambda: ConceptAssertion(ind(), _concept(rng, lim)),
        lambda: ConceptAssertion(ind(), _concept(rng, lim)),
        lambda: RoleAssertion(ind(), ind(), role(), negated=rng.random() < 0.2),
        lambda: EqualityAssertion(ind(), ind(), negated=rng.random() < 0.5),
        lambda: ConceptInclusion(*_pair(rng, lim)),
        lambda: ConceptEquivalence(ConceptName(rng.choice(lim.concepts)), ConceptNot(ConceptName(rng.choice(lim.concepts)))),
        lambda: ConceptEquivalence(ConceptName(rng.choice(lim.concepts)), ConceptAnd(*_pair(rng, lim))),
        lambda: ConceptEquivalence(ConceptName(rng.choice(lim.concepts)), ConceptOr(*_pair(rng, lim))),
        lambda: ConceptEquivalence(ConceptName(rng.choice(lim.concepts)), Nominal((ind(),))),
        lambda: ForAllInclusion(ConceptName(rng.choice(lim.concepts)), role(), ConceptName(rng.choice(lim.concepts))),
        lambda: ExistsInclusion(role(), ConceptName(rng.choice(lim.concepts)), ConceptName(rng.choice(lim.concepts))),
        lambda: RoleInclusion(role(), role()),
        lambda: RoleProperty(rng.choice([RoleCharacteristic.SYM, RoleCharacteristic.TRA,
                                         RoleCharacteristic.IRREF, RoleCharacteristic.FUN]), role()),
    ]
    if lim.concrete:
        makers.append(lambda: ConcreteRoleAssertion(ind(), rng.choice(lim.constants), ConcreteRoleName(CONCRETE),
                                                    negated=rng.random() < 0.2))
    return rng.choice(makers)()


def random_kb(rng: random.Random, limits: Optional[CorpusLimits] = None) -> KnowledgeBase:
    lim = limits or CorpusLimits()
    n = rng.randint(1, lim.axioms)
    statements = [random_statement(rng, lim) for _ in range(n)]
    dmap = DatatypeMap.build({DATATYPE: tuple(c.value for c in lim.constants)}) if lim.concrete else DatatypeMap()
    return KnowledgeBase.of(*statements, dmap=dmap)


def random_query(rng: random.Random, kb: KnowledgeBase, *, max_literals: int = 3,
                 negative: bool = False) -> HOQuery:
    """Conjunction over the eight atom shapes; negated literals only when asked for."""
    sig = signature(kb)
    individuals: Sequence[str] = sorted(sig.individuals) or ["a"]
    concepts = sorted(sig.concepts) or ["A"]
    roles = sorted(sig.abstract_roles - {"U"}) or ["R"]
    x = QueryVariable("?x", VariableSort.INDIVIDUAL)
    y = QueryVariable("?y", VariableSort.INDIVIDUAL)
    arg = lambda: rng.choice([x, y, rng.choice(individuals)])
    shapes: List[Callable[[], object]] = [
        lambda: ConceptAtom(ConceptName(rng.choice(concepts)), arg()),
        lambda: ConceptAtom(QueryVariable("?c", VariableSort.CONCEPT), arg()),
        lambda: RoleAtom(RoleName(rng.choice(roles)), arg(), arg()),
        lambda: RoleAtom(QueryVariable("?r", VariableSort.ABSTRACT_ROLE), arg(), arg()),
        lambda: EqualityAtom(arg(), arg()),
    ]
    if sig.concrete_roles:
        values = [y, *sorted(sig.constants)]
        value = lambda: rng.choice(values)
        shapes.append(lambda: RoleAtom(ConcreteRoleName(CONCRETE), rng.choice([x, rng.choice(individuals)]), value()))
    literals = []
    for _ in range(rng.randint(1, max_literals)):
        atom = rng.choice(shapes)()
        literals.append(HOLiteral(atom, not (negative and rng.random() < 0.3)))
    return _repair(HOQuery(tuple(literals)))


def _repair(q: HOQuery) -> HOQuery:
    """Drop literals that would put one variable in both individual and data positions."""
    while True:
        ind, data = data_positions(q)
        clash = ind & data
        if not clash:
            return q
        keep = tuple(l for l in q.literals
                     if not (isinstance(l.atom, RoleAtom) and isinstance(l.atom.role, ConcreteRoleName)
                             and l.atom.second in clash))
        q = HOQuery(keep)
