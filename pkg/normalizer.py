"""
Flattening of nested terms into named one-level definitions.

Translation is a finite table over statement shapes whose arguments are names;
every complex subterm is therefore replaced by a fresh internal name `$N<k>`
together with a definition `$N<k> == <one-level term>`. Structurally equal
terms share one name.
"""

from __future__ import annotations

import logging
from typing import Dict, List, Optional, Tuple, Union

from error_logger import TranslationError
from kb_model import (
    AtLeastInclusion,
    AtMostInclusion,
    Bottom,
    ConceptAnd,
    ConceptAssertion,
    ConceptEquivalence,
    ConceptInclusion,
    ConceptName,
    ConceptNot,
    ConceptOr,
    ConceptTerm,
    ConcreteAnd,
    ConcreteDomainRestriction,
    ConcreteFunctional,
    ConcreteNot,
    ConcreteOr,
    ConcreteRangeRestriction,
    ConcreteRestriction,
    ConcreteRoleAssertion,
    ConcreteRoleDisjointness,
    ConcreteRoleEquivalence,
    ConcreteRoleInclusion,
    ConcreteRoleName,
    ConcreteRoleTerm,
    DataAnd,
    DataAssertion,
    DataEnumeration,
    DataHasValue,
    DataNot,
    DataOr,
    DataTerm,
    DataTermEquivalence,
    DataTermInclusion,
    DataTermName,
    DatatypeRef,
    DomainRestriction,
    EqualityAssertion,
    ExistsInclusion,
    FacetExpression,
    ForAllInclusion,
    HasValue,
    Identity,
    Inverse,
    KnowledgeBase,
    Nominal,
    Product,
    RangeRestriction,
    Restriction,
    RoleAnd,
    RoleAssertion,
    RoleChain,
    RoleDisjointness,
    RoleEquivalence,
    RoleInclusion,
    RoleName,
    RoleNot,
    RoleOr,
    RoleProperty,
    RoleTerm,
    SelfRestriction,
    Statement,
    Top,
)
from naming import INTERNAL_PREFIX
from query_model import ConceptAtom, HOLiteral, HOQuery, QueryVariable, RoleAtom

logger = logging.getLogger(__name__)

Term = Union[ConceptTerm, RoleTerm, ConcreteRoleTerm, DataTerm]

ATOMIC = (ConceptName, Top, Bottom, Nominal, RoleName, ConcreteRoleName,
          DatatypeRef, FacetExpression, DataEnumeration, DataTermName)


def is_atomic(term: object) -> bool:
    return isinstance(term, ATOMIC)


def is_name(term: object) -> bool:
    return isinstance(term, (ConceptName, RoleName, ConcreteRoleName, DataTermName))


class Flattener:
    def __init__(self) -> None:
        self.table: Dict[Term, Term] = {}
        self.definitions: List[Statement] = []
        self._counter = 0

    def _fresh(self, term: Term) -> Term:
        self._counter += 1
        name = f"{INTERNAL_PREFIX}N{self._counter}"
        if isinstance(term, ConceptTerm):
            return ConceptName(name)
        if isinstance(term, RoleTerm):
            return RoleName(name)
        if isinstance(term, ConcreteRoleTerm):
            return ConcreteRoleName(name)
        return DataTermName(name)

    def atom(self, term: Term) -> Term:
        """A name (or otherwise atomic term) standing for term."""
        if is_atomic(term):
            return term
        known = self.table.get(term)
        if known is not None:
            return known
        shape = self.one_level(term)
        name = self._fresh(term)
        self.table[term] = name
        self.definitions.append(_equivalence(name, shape))
        logger.debug("defined %s as %s", getattr(name, "name", name), type(term).__name__)
        return name

    def one_level(self, term: Term) -> Term:
        """term with every direct argument replaced by an atom."""
        a = self.atom
        if is_atomic(term):
            return term
        if isinstance(term, ConceptNot):
            return ConceptNot(a(term.operand))
        if isinstance(term, ConceptAnd):
            return ConceptAnd(a(term.left), a(term.right))
        if isinstance(term, ConceptOr):
            return ConceptOr(a(term.left), a(term.right))
        if isinstance(term, SelfRestriction):
            return SelfRestriction(a(term.role))
        if isinstance(term, HasValue):
            return HasValue(a(term.role), term.individual)
        if isinstance(term, DataHasValue):
            return DataHasValue(a(term.role), term.constant)
        if isinstance(term, Inverse):
            return Inverse(a(term.role))
        if isinstance(term, RoleNot):
            return RoleNot(a(term.role))
        if isinstance(term, RoleOr):
            return RoleOr(a(term.left), a(term.right))
        if isinstance(term, RoleAnd):
            return RoleAnd(a(term.left), a(term.right))
        if isinstance(term, DomainRestriction):
            return DomainRestriction(a(term.role), a(term.concept))
        if isinstance(term, RangeRestriction):
            return RangeRestriction(a(term.role), a(term.concept))
        if isinstance(term, Restriction):
            return Restriction(a(term.role), a(term.domain), a(term.range))
        if isinstance(term, Identity):
            return Identity(a(term.concept))
        if isinstance(term, Product):
            return Product(a(term.left), a(term.right))
        if isinstance(term, ConcreteNot):
            return ConcreteNot(a(term.role))
        if isinstance(term, ConcreteOr):
            return ConcreteOr(a(term.left), a(term.right))
        if isinstance(term, ConcreteAnd):
            return ConcreteAnd(a(term.left), a(term.right))
        if isinstance(term, ConcreteDomainRestriction):
            return ConcreteDomainRestriction(a(term.role), a(term.concept))
        if isinstance(term, ConcreteRangeRestriction):
            return ConcreteRangeRestriction(a(term.role), a(term.data))
        if isinstance(term, ConcreteRestriction):
            return ConcreteRestriction(a(term.role), a(term.concept), a(term.data))
        if isinstance(term, DataNot):
            return DataNot(a(term.operand))
        if isinstance(term, DataAnd):
            return DataAnd(a(term.left), a(term.right))
        if isinstance(term, DataOr):
            return DataOr(a(term.left), a(term.right))
        raise TranslationError(f"cannot flatten term {type(term).__name__}")

    def statement(self, s: Statement) -> Statement:
        a = self.atom
        if isinstance(s, (ConceptEquivalence, RoleEquivalence, ConcreteRoleEquivalence, DataTermEquivalence)):
            left, right = s.left, s.right
            if not is_name(left) and is_name(right):
                left, right = right, left
            if not is_atomic(left) and is_atomic(right):
                left, right = right, left
            return type(s)(a(left), self.one_level(right))
        if isinstance(s, (ConceptInclusion, RoleInclusion, ConcreteRoleInclusion, DataTermInclusion)):
            return type(s)(a(s.sub), a(s.sup))
        if isinstance(s, (RoleDisjointness, ConcreteRoleDisjointness)):
            return type(s)(a(s.left), a(s.right))
        if isinstance(s, RoleChain):
            return RoleChain(tuple(a(r) for r in s.chain), a(s.sup))
        if isinstance(s, RoleProperty):
            return RoleProperty(s.kind, a(s.role))
        if isinstance(s, ConcreteFunctional):
            return ConcreteFunctional(a(s.role))
        if isinstance(s, ForAllInclusion):
            return ForAllInclusion(a(s.sub), a(s.role), a(s.filler))
        if isinstance(s, ExistsInclusion):
            return ExistsInclusion(a(s.role), a(s.filler), a(s.sup))
        if isinstance(s, AtLeastInclusion):
            return AtLeastInclusion(s.n, a(s.role), a(s.filler), a(s.sup))
        if isinstance(s, AtMostInclusion):
            return AtMostInclusion(a(s.sub), s.n, a(s.role), a(s.filler))
        if isinstance(s, ConceptAssertion):
            return ConceptAssertion(s.individual, a(s.concept))
        if isinstance(s, RoleAssertion):
            return RoleAssertion(s.subject, s.object, a(s.role), s.negated)
        if isinstance(s, ConcreteRoleAssertion):
            return ConcreteRoleAssertion(s.subject, s.constant, a(s.role), s.negated)
        if isinstance(s, DataAssertion):
            return DataAssertion(s.constant, a(s.term))
        if isinstance(s, EqualityAssertion):
            return s
        raise TranslationError(f"unsupported statement {type(s).__name__}")

    def query(self, q: HOQuery) -> HOQuery:
        out = []
        for literal in q.literals:
            atom = literal.atom
            if isinstance(atom, ConceptAtom) and not isinstance(atom.concept, QueryVariable):
                atom = ConceptAtom(self.atom(atom.concept), atom.arg)
            elif isinstance(atom, RoleAtom) and not isinstance(atom.role, QueryVariable):
                atom = RoleAtom(self.atom(atom.role), atom.first, atom.second)
            out.append(HOLiteral(atom, literal.positive))
        return HOQuery(tuple(out))


def _equivalence(name: Term, shape: Term) -> Statement:
    if isinstance(name, ConceptName):
        return ConceptEquivalence(name, shape)
    if isinstance(name, RoleName):
        return RoleEquivalence(name, shape)
    if isinstance(name, ConcreteRoleName):
        return ConcreteRoleEquivalence(name, shape)
    return DataTermEquivalence(name, shape)


def flatten_kb(kb: KnowledgeBase, flattener: Optional[Flattener] = None) -> KnowledgeBase:
    flattener = flattener or Flattener()
    statements = [flattener.statement(s) for s in kb.statements]
    return KnowledgeBase.of(*statements, *flattener.definitions, dmap=kb.dmap)


def flatten_query(q: HOQuery, flattener: Flattener) -> HOQuery:
    return flattener.query(q)


def flatten(kb: KnowledgeBase, query: Optional[HOQuery] = None) -> Tuple[KnowledgeBase, Optional[HOQuery]]:
    """Flatten a KB and (optionally) a query against one shared definition table."""
    flattener = Flattener()
    statements = [flattener.statement(s) for s in kb.statements]
    flat_query = flattener.query(query) if query is not None else None
    flat_kb = KnowledgeBase.of(*statements, *flattener.definitions, dmap=kb.dmap)
    if flattener.definitions:
        logger.info("flattening introduced %d definition(s)", len(flattener.definitions))
    return flat_kb, flat_query
