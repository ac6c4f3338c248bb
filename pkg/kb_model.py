"""
Abstract syntax for knowledge bases: concept, abstract-role, concrete-role and
data terms, RBox/TBox/ABox statements, the finite datatype map, and signature
extraction.

All nodes are frozen dataclasses; structural equality is the identity used by
the normalizer's definition table and by the parse/print round trip.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterator, Optional, Tuple, Union

TOP_FACET = "⊤"
BOTTOM_FACET = "⊥"
UNIVERSAL_ROLE = "U"


@dataclass(frozen=True, order=True)
class Constant:
    value: str
    datatype: str

    def __str__(self) -> str:
        return f'"{self.value}"^{self.datatype}'


Individual = str


class ConceptTerm:
    """Marker base for concept terms."""


class RoleTerm:
    """Marker base for abstract role terms."""


class ConcreteRoleTerm:
    """Marker base for concrete role terms."""


class DataTerm:
    """Marker base for data terms."""


# ---------------------------------------------------------------- concepts

@dataclass(frozen=True)
class ConceptName(ConceptTerm):
    name: str


@dataclass(frozen=True)
class Top(ConceptTerm):
    pass


@dataclass(frozen=True)
class Bottom(ConceptTerm):
    pass


@dataclass(frozen=True)
class ConceptNot(ConceptTerm):
    operand: ConceptTerm


@dataclass(frozen=True)
class ConceptAnd(ConceptTerm):
    left: ConceptTerm
    right: ConceptTerm


@dataclass(frozen=True)
class ConceptOr(ConceptTerm):
    left: ConceptTerm
    right: ConceptTerm


@dataclass(frozen=True)
class Nominal(ConceptTerm):
    individuals: Tuple[Individual, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "individuals", tuple(sorted(set(self.individuals))))


@dataclass(frozen=True)
class SelfRestriction(ConceptTerm):
    role: "RoleTerm"


@dataclass(frozen=True)
class HasValue(ConceptTerm):
    role: "RoleTerm"
    individual: Individual


@dataclass(frozen=True)
class DataHasValue(ConceptTerm):
    role: "ConcreteRoleTerm"
    constant: Constant


# ---------------------------------------------------------------- abstract roles

@dataclass(frozen=True)
class RoleName(RoleTerm):
    name: str


U = RoleName(UNIVERSAL_ROLE)


@dataclass(frozen=True)
class Inverse(RoleTerm):
    role: RoleTerm


@dataclass(frozen=True)
class RoleNot(RoleTerm):
    role: RoleTerm


@dataclass(frozen=True)
class RoleOr(RoleTerm):
    left: RoleTerm
    right: RoleTerm


@dataclass(frozen=True)
class RoleAnd(RoleTerm):
    left: RoleTerm
    right: RoleTerm


@dataclass(frozen=True)
class DomainRestriction(RoleTerm):
    role: RoleTerm
    concept: ConceptTerm


@dataclass(frozen=True)
class RangeRestriction(RoleTerm):
    role: RoleTerm
    concept: ConceptTerm


@dataclass(frozen=True)
class Restriction(RoleTerm):
    role: RoleTerm
    domain: ConceptTerm
    range: ConceptTerm


@dataclass(frozen=True)
class Identity(RoleTerm):
    concept: ConceptTerm


@dataclass(frozen=True)
class Product(RoleTerm):
    left: ConceptTerm
    right: ConceptTerm


# ---------------------------------------------------------------- concrete roles

@dataclass(frozen=True)
class ConcreteRoleName(ConcreteRoleTerm):
    name: str


@dataclass(frozen=True)
class ConcreteNot(ConcreteRoleTerm):
    role: ConcreteRoleTerm


@dataclass(frozen=True)
class ConcreteOr(ConcreteRoleTerm):
    left: ConcreteRoleTerm
    right: ConcreteRoleTerm


@dataclass(frozen=True)
class ConcreteAnd(ConcreteRoleTerm):
    left: ConcreteRoleTerm
    right: ConcreteRoleTerm


@dataclass(frozen=True)
class ConcreteDomainRestriction(ConcreteRoleTerm):
    role: ConcreteRoleTerm
    concept: ConceptTerm


@dataclass(frozen=True)
class ConcreteRangeRestriction(ConcreteRoleTerm):
    role: ConcreteRoleTerm
    data: DataTerm


@dataclass(frozen=True)
class ConcreteRestriction(ConcreteRoleTerm):
    role: ConcreteRoleTerm
    concept: ConceptTerm
    data: DataTerm


# ---------------------------------------------------------------- data terms

@dataclass(frozen=True)
class DatatypeRef(DataTerm):
    name: str


@dataclass(frozen=True, order=True)
class FacetLiteral:
    facet: str
    positive: bool = True

    def negate(self) -> "FacetLiteral":
        return FacetLiteral(self.facet, not self.positive)


@dataclass(frozen=True)
class FacetExpression(DataTerm):
    """Boolean combination of facets of one datatype, kept in CNF."""
    datatype: str
    clauses: Tuple[Tuple[FacetLiteral, ...], ...]

    def __post_init__(self) -> None:
        canon = sorted({tuple(sorted(set(c))) for c in self.clauses})
        object.__setattr__(self, "clauses", tuple(canon))

    @property
    def base_facet(self) -> Optional[str]:
        """The facet name when the expression is a single positive facet, ⊤ or ⊥."""
        if len(self.clauses) == 1 and len(self.clauses[0]) == 1 and self.clauses[0][0].positive:
            return self.clauses[0][0].facet
        return None

    def facets(self) -> FrozenSet[str]:
        return frozenset(l.facet for c in self.clauses for l in c)


def facet(datatype: str, name: str) -> FacetExpression:
    return FacetExpression(datatype, ((FacetLiteral(name),),))


@dataclass(frozen=True)
class DataEnumeration(DataTerm):
    constants: Tuple[Constant, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "constants", tuple(sorted(set(self.constants))))


@dataclass(frozen=True)
class DataNot(DataTerm):
    operand: DataTerm


@dataclass(frozen=True)
class DataAnd(DataTerm):
    left: DataTerm
    right: DataTerm


@dataclass(frozen=True)
class DataOr(DataTerm):
    left: DataTerm
    right: DataTerm


@dataclass(frozen=True)
class DataTermName(DataTerm):
    """Named data term; only introduced by flattening."""
    name: str


# ---------------------------------------------------------------- statements

class RoleCharacteristic(str, Enum):
    SYM = "Sym"
    ASYM = "Asym"
    REF = "Ref"
    IRREF = "Irref"
    TRA = "Tra"
    FUN = "Fun"


class Statement:
    """Marker base for KB statements."""


@dataclass(frozen=True)
class RoleEquivalence(Statement):
    left: RoleTerm
    right: RoleTerm


@dataclass(frozen=True)
class RoleInclusion(Statement):
    sub: RoleTerm
    sup: RoleTerm


@dataclass(frozen=True)
class RoleChain(Statement):
    chain: Tuple[RoleTerm, ...]
    sup: RoleTerm


@dataclass(frozen=True)
class RoleProperty(Statement):
    kind: RoleCharacteristic
    role: RoleTerm


@dataclass(frozen=True)
class RoleDisjointness(Statement):
    left: RoleTerm
    right: RoleTerm


@dataclass(frozen=True)
class ConcreteRoleEquivalence(Statement):
    left: ConcreteRoleTerm
    right: ConcreteRoleTerm


@dataclass(frozen=True)
class ConcreteRoleInclusion(Statement):
    sub: ConcreteRoleTerm
    sup: ConcreteRoleTerm


@dataclass(frozen=True)
class ConcreteRoleDisjointness(Statement):
    left: ConcreteRoleTerm
    right: ConcreteRoleTerm


@dataclass(frozen=True)
class ConcreteFunctional(Statement):
    role: ConcreteRoleTerm


@dataclass(frozen=True)
class ConceptEquivalence(Statement):
    left: ConceptTerm
    right: ConceptTerm


@dataclass(frozen=True)
class ConceptInclusion(Statement):
    sub: ConceptTerm
    sup: ConceptTerm


# The four restriction forms take an abstract role with a concept filler or a
# concrete role with a data-term filler.
@dataclass(frozen=True)
class ForAllInclusion(Statement):
    sub: ConceptTerm
    role: Union[RoleTerm, ConcreteRoleTerm]
    filler: Union[ConceptTerm, DataTerm]


@dataclass(frozen=True)
class ExistsInclusion(Statement):
    role: Union[RoleTerm, ConcreteRoleTerm]
    filler: Union[ConceptTerm, DataTerm]
    sup: ConceptTerm


@dataclass(frozen=True)
class AtLeastInclusion(Statement):
    n: int
    role: Union[RoleTerm, ConcreteRoleTerm]
    filler: Union[ConceptTerm, DataTerm]
    sup: ConceptTerm


@dataclass(frozen=True)
class AtMostInclusion(Statement):
    sub: ConceptTerm
    n: int
    role: Union[RoleTerm, ConcreteRoleTerm]
    filler: Union[ConceptTerm, DataTerm]


@dataclass(frozen=True)
class DataTermEquivalence(Statement):
    left: DataTerm
    right: DataTerm


@dataclass(frozen=True)
class DataTermInclusion(Statement):
    sub: DataTerm
    sup: DataTerm


@dataclass(frozen=True)
class ConceptAssertion(Statement):
    individual: Individual
    concept: ConceptTerm


@dataclass(frozen=True)
class RoleAssertion(Statement):
    subject: Individual
    object: Individual
    role: RoleTerm
    negated: bool = False


@dataclass(frozen=True)
class EqualityAssertion(Statement):
    left: Individual
    right: Individual
    negated: bool = False


@dataclass(frozen=True)
class DataAssertion(Statement):
    constant: Constant
    term: DataTerm


@dataclass(frozen=True)
class ConcreteRoleAssertion(Statement):
    subject: Individual
    constant: Constant
    role: ConcreteRoleTerm
    negated: bool = False


RBOX_FORMS = (RoleEquivalence, RoleInclusion, RoleChain, RoleProperty, RoleDisjointness,
              ConcreteRoleEquivalence, ConcreteRoleInclusion, ConcreteRoleDisjointness,
              ConcreteFunctional)
ABOX_FORMS = (ConceptAssertion, RoleAssertion, EqualityAssertion, DataAssertion,
              ConcreteRoleAssertion)


# ---------------------------------------------------------------- datatype map

@dataclass(frozen=True)
class DatatypeSpec:
    name: str
    constants: Tuple[str, ...]
    facets: Tuple[Tuple[str, Tuple[str, ...]], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "constants", tuple(sorted(set(self.constants))))
        object.__setattr__(self, "facets", tuple(sorted(
            (f, tuple(sorted(set(ext)))) for f, ext in self.facets)))


@dataclass(frozen=True)
class DatatypeMap:
    specs: Tuple[DatatypeSpec, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "specs", tuple(sorted(self.specs, key=lambda s: s.name)))

    @classmethod
    def build(cls, constants: Dict[str, Tuple[str, ...]],
              facets: Optional[Dict[str, Dict[str, Tuple[str, ...]]]] = None) -> "DatatypeMap":
        facets = facets or {}
        return cls(tuple(DatatypeSpec(d, tuple(cs), tuple(facets.get(d, {}).items()))
                         for d, cs in constants.items()))

    @property
    def datatypes(self) -> FrozenSet[str]:
        return frozenset(s.name for s in self.specs)

    @property
    def constants(self) -> Dict[str, Tuple[Constant, ...]]:
        return {s.name: tuple(Constant(v, s.name) for v in s.constants) for s in self.specs}

    @property
    def facets(self) -> Dict[str, Tuple[str, ...]]:
        return {s.name: tuple(f for f, _ in s.facets) for s in self.specs}

    @property
    def facet_extensions(self) -> Dict[Tuple[str, str], Tuple[Constant, ...]]:
        return {(s.name, f): tuple(Constant(v, s.name) for v in ext)
                for s in self.specs for f, ext in s.facets}

    def spec(self, datatype: str) -> Optional[DatatypeSpec]:
        return next((s for s in self.specs if s.name == datatype), None)

    def extension(self, datatype: str, facet_name: str) -> Tuple[Constant, ...]:
        spec = self.spec(datatype)
        if spec is None:
            return ()
        if facet_name == TOP_FACET:
            return tuple(Constant(v, datatype) for v in spec.constants)
        if facet_name == BOTTOM_FACET:
            return ()
        return tuple(Constant(v, datatype) for f, ext in spec.facets if f == facet_name for v in ext)


@dataclass(frozen=True)
class KnowledgeBase:
    rbox: Tuple[Statement, ...] = ()
    tbox: Tuple[Statement, ...] = ()
    abox: Tuple[Statement, ...] = ()
    dmap: DatatypeMap = field(default_factory=DatatypeMap)

    @classmethod
    def of(cls, *statements: Statement, dmap: Optional[DatatypeMap] = None) -> "KnowledgeBase":
        """Sort loose statements into the three boxes, keeping their order."""
        rbox = tuple(s for s in statements if isinstance(s, RBOX_FORMS))
        abox = tuple(s for s in statements if isinstance(s, ABOX_FORMS))
        tbox = tuple(s for s in statements if not isinstance(s, RBOX_FORMS + ABOX_FORMS))
        return cls(rbox, tbox, abox, dmap or DatatypeMap())

    @property
    def statements(self) -> Tuple[Statement, ...]:
        return self.rbox + self.tbox + self.abox

    def extend(self, *statements: Statement) -> "KnowledgeBase":
        more = KnowledgeBase.of(*statements)
        return KnowledgeBase(self.rbox + more.rbox, self.tbox + more.tbox, self.abox + more.abox, self.dmap)


Node = Union[ConceptTerm, RoleTerm, ConcreteRoleTerm, DataTerm, Statement]


def children(node: object) -> Iterator[object]:
    if not dataclasses.is_dataclass(node):
        return
    for f in dataclasses.fields(node):
        value = getattr(node, f.name)
        if isinstance(value, tuple):
            yield from (v for v in value if dataclasses.is_dataclass(v))
        elif dataclasses.is_dataclass(value):
            yield value


def walk(node: object) -> Iterator[object]:
    """Pre-order traversal over every dataclass node below (and including) node."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(list(children(current))))


# ---------------------------------------------------------------- signature

@dataclass(frozen=True)
class Signature:
    concepts: FrozenSet[str] = frozenset()
    abstract_roles: FrozenSet[str] = frozenset({UNIVERSAL_ROLE})
    concrete_roles: FrozenSet[str] = frozenset()
    individuals: FrozenSet[Individual] = frozenset()
    datatypes: FrozenSet[str] = frozenset()
    facets: FrozenSet[Tuple[str, str]] = frozenset()
    constants: FrozenSet[Constant] = frozenset()
    facet_expressions: FrozenSet[FacetExpression] = frozenset()
    nominals: FrozenSet[Nominal] = frozenset()
    enumerations: FrozenSet[DataEnumeration] = frozenset()
    data_terms: FrozenSet[str] = frozenset()

    def facets_of(self, datatype: str) -> FrozenSet[str]:
        return frozenset(f for d, f in self.facets if d == datatype)

    def constants_of(self, datatype: str) -> FrozenSet[Constant]:
        return frozenset(c for c in self.constants if c.datatype == datatype)

    def expressions_of(self, datatype: str) -> FrozenSet[FacetExpression]:
        return frozenset(e for e in self.facet_expressions if e.datatype == datatype)

    def union(self, other: "Signature") -> "Signature":
        return Signature(**{f.name: getattr(self, f.name) | getattr(other, f.name)
                            for f in dataclasses.fields(self)})


def _scan(nodes) -> Signature:
    concepts, roles, croles, inds = set(), {UNIVERSAL_ROLE}, set(), set()
    datatypes, facets, consts = set(), set(), set()
    exprs, nominals, enums, data_terms = set(), set(), set(), set()

    for root in nodes:
        for node in walk(root):
            if isinstance(node, ConceptName):
                concepts.add(node.name)
            elif isinstance(node, RoleName):
                roles.add(node.name)
            elif isinstance(node, ConcreteRoleName):
                croles.add(node.name)
            elif isinstance(node, Constant):
                consts.add(node)
                datatypes.add(node.datatype)
            elif isinstance(node, DatatypeRef):
                datatypes.add(node.name)
            elif isinstance(node, DataTermName):
                data_terms.add(node.name)
            elif isinstance(node, FacetExpression):
                datatypes.add(node.datatype)
                facets.update((node.datatype, f) for f in node.facets()
                              if f not in (TOP_FACET, BOTTOM_FACET))
                if node.base_facet is None:
                    exprs.add(node)
            elif isinstance(node, Nominal):
                nominals.add(node)
                inds.update(node.individuals)
            elif isinstance(node, DataEnumeration):
                enums.add(node)
            elif isinstance(node, HasValue):
                inds.add(node.individual)
            elif isinstance(node, ConceptAssertion):
                inds.add(node.individual)
            elif isinstance(node, (RoleAssertion,)):
                inds.update((node.subject, node.object))
            elif isinstance(node, EqualityAssertion):
                inds.update((node.left, node.right))
            elif isinstance(node, ConcreteRoleAssertion):
                inds.add(node.subject)

    return Signature(frozenset(concepts), frozenset(roles), frozenset(croles), frozenset(inds),
                     frozenset(datatypes), frozenset(facets), frozenset(consts), frozenset(exprs),
                     frozenset(nominals), frozenset(enums), frozenset(data_terms))


def signature(kb: KnowledgeBase) -> Signature:
    return _scan(kb.statements)


def signature_of(*nodes: object) -> Signature:
    return _scan(nodes)
