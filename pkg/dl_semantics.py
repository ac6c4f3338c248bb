"""
Direct set semantics for knowledge bases and HO queries over finite
interpretations, and the read-back of a set-theoretic model as a DL
interpretation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Tuple

from error_logger import InputError
from kb_model import (
    BOTTOM_FACET,
    TOP_FACET,
    UNIVERSAL_ROLE,
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
    Constant,
    DataAnd,
    DataAssertion,
    DataEnumeration,
    DataHasValue,
    DataNot,
    DataOr,
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
    RoleCharacteristic,
    RoleDisjointness,
    RoleEquivalence,
    RoleInclusion,
    RoleName,
    RoleNot,
    RoleOr,
    RoleProperty,
    SelfRestriction,
    Top,
)
from naming import NamingMap
from query_model import ConceptAtom, DLSubstitution, EqualityAtom, HOQuery, QueryVariable, RoleAtom, apply
from setcalc import Interpretation

Elements = FrozenSet[object]
Pairs = FrozenSet[Tuple[object, object]]


@dataclass(frozen=True)
class DLInterpretation:
    individuals: Elements
    data_values: Elements
    concepts: Dict[str, Elements] = field(default_factory=dict)
    roles: Dict[str, Pairs] = field(default_factory=dict)
    concrete_roles: Dict[str, Pairs] = field(default_factory=dict)
    individual_map: Dict[str, object] = field(default_factory=dict)
    constant_map: Dict[Constant, object] = field(default_factory=dict)
    datatypes: Dict[str, Elements] = field(default_factory=dict)
    facets: Dict[Tuple[str, str], Elements] = field(default_factory=dict)
    data_terms: Dict[str, Elements] = field(default_factory=dict)

    def element(self, entity) -> object:
        try:
            if isinstance(entity, Constant):
                return self.constant_map[entity]
            return self.individual_map[entity]
        except KeyError:
            raise InputError(f"{entity} is not interpreted") from None


def _facet(I: DLInterpretation, d: str, f: str) -> Elements:
    if f == TOP_FACET:
        return I.datatypes.get(d, frozenset())
    if f == BOTTOM_FACET:
        return frozenset()
    return I.facets.get((d, f), frozenset())


def term_extension(I: DLInterpretation, term) -> FrozenSet:
    ext = lambda t: term_extension(I, t)
    delta, data = I.individuals, I.data_values
    # concepts
    if isinstance(term, ConceptName):
        return I.concepts.get(term.name, frozenset())
    if isinstance(term, Top):
        return delta
    if isinstance(term, Bottom):
        return frozenset()
    if isinstance(term, ConceptNot):
        return delta - ext(term.operand)
    if isinstance(term, (ConceptAnd, RoleAnd, ConcreteAnd, DataAnd)):
        return ext(term.left) & ext(term.right)
    if isinstance(term, (ConceptOr, RoleOr, ConcreteOr, DataOr)):
        return ext(term.left) | ext(term.right)
    if isinstance(term, Nominal):
        return frozenset(I.element(a) for a in term.individuals)
    if isinstance(term, SelfRestriction):
        return frozenset(x for x, y in ext(term.role) if x == y)
    if isinstance(term, HasValue):
        target = I.element(term.individual)
        return frozenset(x for x, y in ext(term.role) if y == target)
    if isinstance(term, DataHasValue):
        target = I.element(term.constant)
        return frozenset(x for x, y in ext(term.role) if y == target)
    # abstract roles
    if isinstance(term, RoleName):
        if term.name == UNIVERSAL_ROLE:
            return frozenset(itertools.product(delta, delta))
        return I.roles.get(term.name, frozenset())
    if isinstance(term, Inverse):
        return frozenset((y, x) for x, y in ext(term.role))
    if isinstance(term, RoleNot):
        return frozenset(itertools.product(delta, delta)) - ext(term.role)
    if isinstance(term, (DomainRestriction, ConcreteDomainRestriction)):
        c = ext(term.concept)
        return frozenset(p for p in ext(term.role) if p[0] in c)
    if isinstance(term, RangeRestriction):
        c = ext(term.concept)
        return frozenset(p for p in ext(term.role) if p[1] in c)
    if isinstance(term, Restriction):
        c, d = ext(term.domain), ext(term.range)
        return frozenset(p for p in ext(term.role) if p[0] in c and p[1] in d)
    if isinstance(term, Identity):
        return frozenset((x, x) for x in ext(term.concept))
    if isinstance(term, Product):
        return frozenset(itertools.product(ext(term.left), ext(term.right)))
    # concrete roles
    if isinstance(term, ConcreteRoleName):
        return I.concrete_roles.get(term.name, frozenset())
    if isinstance(term, ConcreteNot):
        return frozenset(itertools.product(delta, data)) - ext(term.role)
    if isinstance(term, ConcreteRangeRestriction):
        t = ext(term.data)
        return frozenset(p for p in ext(term.role) if p[1] in t)
    if isinstance(term, ConcreteRestriction):
        c, t = ext(term.concept), ext(term.data)
        return frozenset(p for p in ext(term.role) if p[0] in c and p[1] in t)
    # data terms
    if isinstance(term, DatatypeRef):
        return I.datatypes.get(term.name, frozenset())
    if isinstance(term, FacetExpression):
        base = I.datatypes.get(term.datatype, frozenset())
        return frozenset(v for v in base if all(
            any((v in _facet(I, term.datatype, l.facet)) == l.positive for l in clause)
            for clause in term.clauses))
    if isinstance(term, DataEnumeration):
        return frozenset(I.element(c) for c in term.constants)
    if isinstance(term, DataNot):
        return data - ext(term.operand)
    if isinstance(term, DataTermName):
        return I.data_terms.get(term.name, frozenset())
    raise InputError(f"no extension for {type(term).__name__}")


def _successors(pairs, x, filler) -> int:
    return sum(1 for a, b in pairs if a == x and b in filler)


def _compose(left, right):
    return frozenset((x, z) for x, y in left for y2, z in right if y == y2)


def satisfies(I: DLInterpretation, s) -> bool:
    ext = lambda t: term_extension(I, t)
    if isinstance(s, (ConceptEquivalence, RoleEquivalence, ConcreteRoleEquivalence, DataTermEquivalence)):
        return ext(s.left) == ext(s.right)
    if isinstance(s, (ConceptInclusion, RoleInclusion, ConcreteRoleInclusion, DataTermInclusion)):
        return ext(s.sub) <= ext(s.sup)
    if isinstance(s, (RoleDisjointness, ConcreteRoleDisjointness)):
        return not (ext(s.left) & ext(s.right))
    if isinstance(s, ForAllInclusion):
        r, f = ext(s.role), ext(s.filler)
        return all(y in f for x in ext(s.sub) for a, y in r if a == x)
    if isinstance(s, ExistsInclusion):
        r, f, c = ext(s.role), ext(s.filler), ext(s.sup)
        return all(x in c for x, y in r if y in f)
    if isinstance(s, AtLeastInclusion):
        r, f, c = ext(s.role), ext(s.filler), ext(s.sup)
        return all(x in c for x in I.individuals if _successors(r, x, f) >= s.n)
    if isinstance(s, AtMostInclusion):
        r, f = ext(s.role), ext(s.filler)
        return all(_successors(r, x, f) <= s.n for x in ext(s.sub))
    if isinstance(s, RoleChain):
        path = ext(s.chain[0])
        for role in s.chain[1:]:
            path = _compose(path, ext(role))
        return path <= ext(s.sup)
    if isinstance(s, RoleProperty):
        r = ext(s.role)
        if s.kind is RoleCharacteristic.SYM:
            return all((y, x) in r for x, y in r)
        if s.kind is RoleCharacteristic.ASYM:
            return not any((y, x) in r for x, y in r)
        if s.kind is RoleCharacteristic.REF:
            return all((x, x) in r for x in I.individuals)
        if s.kind is RoleCharacteristic.IRREF:
            return not any(x == y for x, y in r)
        if s.kind is RoleCharacteristic.TRA:
            return _compose(r, r) <= r
        return all(_successors(r, x, I.individuals | I.data_values) <= 1 for x, _ in r)
    if isinstance(s, ConcreteFunctional):
        r = ext(s.role)
        return all(_successors(r, x, I.data_values) <= 1 for x, _ in r)
    if isinstance(s, ConceptAssertion):
        return I.element(s.individual) in ext(s.concept)
    if isinstance(s, RoleAssertion):
        holds_ = (I.element(s.subject), I.element(s.object)) in ext(s.role)
        return holds_ != s.negated
    if isinstance(s, ConcreteRoleAssertion):
        holds_ = (I.element(s.subject), I.element(s.constant)) in ext(s.role)
        return holds_ != s.negated
    if isinstance(s, EqualityAssertion):
        return (I.element(s.left) == I.element(s.right)) != s.negated
    if isinstance(s, DataAssertion):
        return I.element(s.constant) in ext(s.term)
    raise InputError(f"no semantics for {type(s).__name__}")


def satisfies_kb(I: DLInterpretation, kb: KnowledgeBase) -> bool:
    return all(satisfies(I, s) for s in kb.statements)


def from_4lqs_model(m: Interpretation, nm: NamingMap, kb: KnowledgeBase) -> DLInterpretation:
    """Read a set-theoretic model back as a DL interpretation through the naming map."""
    value = lambda v: m.assignment.get(v, frozenset())
    concepts, roles, croles, inds, consts = {}, {}, {}, {}, {}
    datatypes, facets, data_terms = {}, {}, {}
    for v in nm.variables():
        if v.is_placeholder:
            continue
        key = nm.entity_of(v)
        category = key[0]
        if category == "concept":
            concepts[key[1]] = frozenset(value(v))
        elif category == "role":
            roles[key[1]] = frozenset(value(v))
        elif category == "concrete_role":
            croles[key[1]] = frozenset(value(v))
        elif category == "individual":
            inds[key[1]] = m.value(v)
        elif category == "constant":
            consts[key[1]] = m.value(v)
        elif category == "datatype":
            datatypes[key[1]] = frozenset(value(v))
        elif category == "facet" and key[2] not in (TOP_FACET, BOTTOM_FACET):
            facets[(key[1], key[2])] = frozenset(value(v))
        elif category == "data_term":
            data_terms[key[1]] = frozenset(value(v))
    individuals = frozenset(value(nm.reserved("I")))
    data_values = frozenset(value(nm.reserved("D")))
    for d in kb.dmap.datatypes:
        datatypes.setdefault(d, frozenset())
    return DLInterpretation(individuals, data_values, concepts, roles, croles, inds, consts,
                            datatypes, facets, data_terms)


def _argument(I: DLInterpretation, arg) -> object:
    if isinstance(arg, QueryVariable):
        raise InputError(f"query variable {arg.name} is unbound")
    return I.element(arg)


def holds(I: DLInterpretation, query: HOQuery, sigma: DLSubstitution) -> bool:
    """Whether the instantiated query is true in I."""
    for literal in apply(sigma, query).literals:
        atom = literal.atom
        if isinstance(atom, ConceptAtom):
            if isinstance(atom.concept, QueryVariable):
                raise InputError(f"query variable {atom.concept.name} is unbound")
            truth = _argument(I, atom.arg) in term_extension(I, atom.concept)
        elif isinstance(atom, RoleAtom):
            if isinstance(atom.role, QueryVariable):
                raise InputError(f"query variable {atom.role.name} is unbound")
            truth = (_argument(I, atom.first), _argument(I, atom.second)) in term_extension(I, atom.role)
        elif isinstance(atom, EqualityAtom):
            truth = _argument(I, atom.left) == _argument(I, atom.right)
        else:
            raise InputError(f"unknown query atom {type(atom).__name__}")
        if truth != literal.positive:
            return False
    return True
