"""
Translation of flattened knowledge bases and queries into set-theoretic CNF.

`build_phi_kb` conjoins the translation of every statement with the twelve
signature-indexed constraint groups (domain typing, datatype disjointness,
nonemptiness, nominal and data-range extensions, facet expressions) and, by
default, a datatype closure group that pins every datatype to its declared
constants.

Two switches change the emitted clauses:

* ``verbatim_theta`` emits complements and qualified cardinalities exactly in
  their displayed shape. The default relativizes complements to the matching
  universe (individuals, data values, or pairs of them) and writes cardinality
  restrictions as a single clause.
* ``close_datatypes`` adds the datatype closure group.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from error_logger import InputError, TranslationError
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
    DatatypeMap,
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
    Signature,
    Statement,
    Top,
    signature,
    signature_of,
)
from naming import NamingMap
from query_model import (
    ConceptAtom,
    DLSubstitution,
    EqualityAtom,
    HOQuery,
    QueryVariable,
    RoleAtom,
)
from setcalc import (
    Clause,
    Eq,
    Formula,
    GroundLiteral,
    Mem1,
    Mem3,
    PurelyUniversal,
    SetVariable,
    bound,
    neg,
    pos,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------- propositional CNF

@dataclass(frozen=True)
class PLit:
    literal: GroundLiteral


@dataclass(frozen=True)
class PNot:
    operand: "Prop"


@dataclass(frozen=True)
class PAnd:
    items: Tuple["Prop", ...]


@dataclass(frozen=True)
class POr:
    items: Tuple["Prop", ...]


Prop = Union[PLit, PNot, PAnd, POr]


def _nnf(p: Prop, negated: bool = False) -> Prop:
    if isinstance(p, PLit):
        return PLit(p.literal.complement()) if negated else p
    if isinstance(p, PNot):
        return _nnf(p.operand, not negated)
    items = tuple(_nnf(i, negated) for i in p.items)
    if isinstance(p, PAnd):
        return POr(items) if negated else PAnd(items)
    return PAnd(items) if negated else POr(items)


def _distribute(p: Prop) -> List[Tuple[GroundLiteral, ...]]:
    if isinstance(p, PLit):
        return [(p.literal,)]
    if isinstance(p, PAnd):
        return [c for i in p.items for c in _distribute(i)]
    # POr: cross product of the operands' clause sets
    out: List[Tuple[GroundLiteral, ...]] = [()]
    for item in p.items:
        out = [a + b for a in out for b in _distribute(item)]
    return out


def to_cnf(p: Prop) -> Tuple[Clause, ...]:
    """Clauses of a propositional combination of ground-literal templates (tautologies dropped)."""
    clauses = {Clause.of(*c) for c in _distribute(_nnf(p))}
    return tuple(sorted(c for c in clauses if not _complementary(c)))


def _complementary(c: Clause) -> bool:
    present = set(c.literals)
    return any(l.complement() in present for l in c.literals)


# ---------------------------------------------------------------- translator

class Translator:
    def __init__(self, nm: NamingMap, *, verbatim_theta: bool = False,
                 close_datatypes: bool = True) -> None:
        self.nm = nm
        self.verbatim = verbatim_theta
        self.close_datatypes = close_datatypes
        self._bound = 0

    # -- variables
    def _z(self, n: int) -> Tuple[SetVariable, ...]:
        out = []
        for _ in range(n):
            self._bound += 1
            out.append(bound(self._bound))
        return tuple(out)

    @property
    def I(self) -> SetVariable:
        return self.nm.reserved("I")

    @property
    def D(self) -> SetVariable:
        return self.nm.reserved("D")

    def var(self, term) -> SetVariable:
        nm = self.nm
        if isinstance(term, ConceptName):
            return nm.concept(term.name)
        if isinstance(term, Top):
            return nm.reserved("Top")
        if isinstance(term, Bottom):
            return nm.reserved("Bot")
        if isinstance(term, Nominal):
            return nm.nominal(term)
        if isinstance(term, RoleName):
            return nm.role(term.name)
        if isinstance(term, ConcreteRoleName):
            return nm.concrete_role(term.name)
        if isinstance(term, DatatypeRef):
            return nm.datatype(term.name)
        if isinstance(term, FacetExpression):
            return nm.facet_expression(term)
        if isinstance(term, DataEnumeration):
            return nm.enumeration(term)
        if isinstance(term, DataTermName):
            return nm.data_term(term.name)
        raise TranslationError(f"{type(term).__name__} must be flattened to a name before translation")

    def obj(self, entity: Union[str, Constant]) -> SetVariable:
        if isinstance(entity, Constant):
            return self.nm.constant(entity)
        return self.nm.individual(entity)

    def _forall(self, quantified: Sequence[SetVariable], clauses: Iterable[Sequence[GroundLiteral]],
                origin: str) -> Formula:
        matrix = tuple(Clause.of(*c) for c in clauses)
        return Formula((PurelyUniversal(tuple(quantified), matrix, origin),))

    # -- shapes shared by several statement forms
    def _set_equiv(self, x: SetVariable, y: SetVariable, origin: str) -> Formula:
        (z,) = self._z(1)
        return self._forall((z,), [[neg(Mem1(z, x)), pos(Mem1(z, y))],
                                   [neg(Mem1(z, y)), pos(Mem1(z, x))]], origin)

    def _pair_equiv(self, x: SetVariable, y: SetVariable, origin: str) -> Formula:
        z1, z2 = self._z(2)
        return self._forall((z1, z2), [[neg(Mem3(z1, z2, x)), pos(Mem3(z1, z2, y))],
                                       [neg(Mem3(z1, z2, y)), pos(Mem3(z1, z2, x))]], origin)

    def _enumerated(self, x: SetVariable, members: Sequence[SetVariable], origin: str) -> Formula:
        (z,) = self._z(1)
        clauses = [[neg(Mem1(z, x))] + [pos(Eq(z, m)) for m in members]]
        clauses += [[neg(Eq(z, m)), pos(Mem1(z, x))] for m in members]
        return self._forall((z,), clauses, origin)

    def _set_boolean(self, x: SetVariable, rhs, origin: str, universe: SetVariable) -> Formula:
        (z,) = self._z(1)
        m = lambda s: Mem1(z, s)
        if isinstance(rhs, (ConceptNot, DataNot)):
            y = self.var(rhs.operand)
            cover = [pos(m(y)), pos(m(x))]
            if not self.verbatim:
                cover.append(neg(m(universe)))
            return self._forall((z,), [[neg(m(x)), neg(m(y))], cover], origin)
        y, w = self.var(rhs.left), self.var(rhs.right)
        if isinstance(rhs, (ConceptOr, DataOr)):
            return self._forall((z,), [[neg(m(x)), pos(m(y)), pos(m(w))],
                                       [neg(m(y)), pos(m(x))],
                                       [neg(m(w)), pos(m(x))]], origin)
        return self._forall((z,), [[neg(m(x)), pos(m(y))],
                                   [neg(m(x)), pos(m(w))],
                                   [neg(m(y)), neg(m(w)), pos(m(x))]], origin)

    def _pair_boolean(self, x: SetVariable, rhs, origin: str, second_universe: SetVariable) -> Formula:
        z1, z2 = self._z(2)
        p = lambda r: Mem3(z1, z2, r)
        if isinstance(rhs, (RoleNot, ConcreteNot)):
            y = self.var(rhs.role)
            cover = [pos(p(y)), pos(p(x))]
            if not self.verbatim:
                cover += [neg(Mem1(z1, self.I)), neg(Mem1(z2, second_universe))]
            return self._forall((z1, z2), [[neg(p(x)), neg(p(y))], cover], origin)
        y, w = self.var(rhs.left), self.var(rhs.right)
        if isinstance(rhs, (RoleOr, ConcreteOr)):
            return self._forall((z1, z2), [[neg(p(x)), pos(p(y)), pos(p(w))],
                                           [neg(p(y)), pos(p(x))],
                                           [neg(p(w)), pos(p(x))]], origin)
        return self._forall((z1, z2), [[neg(p(x)), pos(p(y))],
                                       [neg(p(x)), pos(p(w))],
                                       [neg(p(y)), neg(p(w)), pos(p(x))]], origin)

    def _pair_restriction(self, x: SetVariable, role: SetVariable, domain: Optional[SetVariable],
                          rng: Optional[SetVariable], origin: str) -> Formula:
        z1, z2 = self._z(2)
        clauses = [[neg(Mem3(z1, z2, x)), pos(Mem3(z1, z2, role))]]
        back = [neg(Mem3(z1, z2, role))]
        if domain is not None:
            clauses.append([neg(Mem3(z1, z2, x)), pos(Mem1(z1, domain))])
            back.append(neg(Mem1(z1, domain)))
        if rng is not None:
            clauses.append([neg(Mem3(z1, z2, x)), pos(Mem1(z2, rng))])
            back.append(neg(Mem1(z2, rng)))
        clauses.append(back + [pos(Mem3(z1, z2, x))])
        return self._forall((z1, z2), clauses, origin)

    def _cardinality(self, s: Union[AtLeastInclusion, AtMostInclusion], origin: str) -> Formula:
        role, filler = self.var(s.role), self.var(s.filler)
        at_most = isinstance(s, AtMostInclusion)
        width = s.n + 1 if at_most else s.n
        z, *succ = self._z(width + 1)
        edges = [[neg(Mem1(zi, filler)), neg(Mem3(z, zi, role))] for zi in succ]
        merges = [pos(Eq(a, b)) for a, b in itertools.combinations(succ, 2)]
        if at_most:
            side = [neg(Mem1(z, self.var(s.sub)))]
        else:
            side = [pos(Mem1(z, self.var(s.sup)))]
        if self.verbatim:
            clauses = [side + e + merges for e in edges]
        else:
            clauses = [side + [l for e in edges for l in e] + merges]
        return self._forall((z, *succ), clauses, origin)

    # -- statements
    def statement(self, s: Statement) -> Formula:
        origin = type(s).__name__
        if isinstance(s, ConceptEquivalence):
            return self._concept_equivalence(s, origin)
        if isinstance(s, (ConceptInclusion, DataTermInclusion)):
            (z,) = self._z(1)
            return self._forall((z,), [[neg(Mem1(z, self.var(s.sub))), pos(Mem1(z, self.var(s.sup)))]], origin)
        if isinstance(s, ForAllInclusion):
            z1, z2 = self._z(2)
            return self._forall((z1, z2), [[neg(Mem1(z1, self.var(s.sub))),
                                            neg(Mem3(z1, z2, self.var(s.role))),
                                            pos(Mem1(z2, self.var(s.filler)))]], origin)
        if isinstance(s, ExistsInclusion):
            z1, z2 = self._z(2)
            return self._forall((z1, z2), [[neg(Mem3(z1, z2, self.var(s.role))),
                                            neg(Mem1(z2, self.var(s.filler))),
                                            pos(Mem1(z1, self.var(s.sup)))]], origin)
        if isinstance(s, (AtLeastInclusion, AtMostInclusion)):
            if s.n < 1:
                raise InputError(f"cardinality must be ≥ 1, got {s.n}")
            return self._cardinality(s, origin)
        if isinstance(s, (RoleEquivalence, ConcreteRoleEquivalence)):
            return self._role_equivalence(s, origin)
        if isinstance(s, (RoleInclusion, ConcreteRoleInclusion)):
            z1, z2 = self._z(2)
            return self._forall((z1, z2), [[neg(Mem3(z1, z2, self.var(s.sub))),
                                            pos(Mem3(z1, z2, self.var(s.sup)))]], origin)
        if isinstance(s, (RoleDisjointness, ConcreteRoleDisjointness)):
            z1, z2 = self._z(2)
            return self._forall((z1, z2), [[neg(Mem3(z1, z2, self.var(s.left))),
                                            neg(Mem3(z1, z2, self.var(s.right)))]], origin)
        if isinstance(s, RoleChain):
            return self._chain([self.var(r) for r in s.chain], self.var(s.sup), origin)
        if isinstance(s, RoleProperty):
            return self._property(s.kind, self.var(s.role), f"{origin}:{s.kind.value}")
        if isinstance(s, ConcreteFunctional):
            return self._property(RoleCharacteristic.FUN, self.var(s.role), origin)
        if isinstance(s, DataTermEquivalence):
            return self._data_equivalence(s, origin)
        return Formula(ground=(self.assertion(s),))

    def _concept_equivalence(self, s: ConceptEquivalence, origin: str) -> Formula:
        x, rhs = self.var(s.left), s.right
        if isinstance(rhs, Nominal):
            return self._enumerated(x, [self.obj(a) for a in rhs.individuals], origin)
        if isinstance(rhs, (ConceptName, Top, Bottom)):
            return self._set_equiv(x, self.var(rhs), origin)
        if isinstance(rhs, (ConceptNot, ConceptAnd, ConceptOr)):
            return self._set_boolean(x, rhs, origin, self.I)
        if isinstance(rhs, (SelfRestriction, HasValue, DataHasValue)):
            (z,) = self._z(1)
            role = self.var(rhs.role)
            if isinstance(rhs, SelfRestriction):
                target = z
            elif isinstance(rhs, HasValue):
                target = self.obj(rhs.individual)
            else:
                target = self.obj(rhs.constant)
            return self._forall((z,), [[neg(Mem1(z, x)), pos(Mem3(z, target, role))],
                                       [neg(Mem3(z, target, role)), pos(Mem1(z, x))]], origin)
        raise TranslationError(f"unsupported concept definition {type(rhs).__name__}")

    def _role_equivalence(self, s, origin: str) -> Formula:
        x, rhs = self.var(s.left), s.right
        if isinstance(rhs, (RoleName, ConcreteRoleName)):
            return self._pair_equiv(x, self.var(rhs), origin)
        if isinstance(rhs, Inverse):
            z1, z2 = self._z(2)
            y = self.var(rhs.role)
            return self._forall((z1, z2), [[neg(Mem3(z1, z2, x)), pos(Mem3(z2, z1, y))],
                                           [neg(Mem3(z2, z1, y)), pos(Mem3(z1, z2, x))]], origin)
        if isinstance(rhs, (RoleNot, RoleOr, RoleAnd)):
            return self._pair_boolean(x, rhs, origin, self.I)
        if isinstance(rhs, (ConcreteNot, ConcreteOr, ConcreteAnd)):
            return self._pair_boolean(x, rhs, origin, self.D)
        if isinstance(rhs, (DomainRestriction, ConcreteDomainRestriction)):
            return self._pair_restriction(x, self.var(rhs.role), self.var(rhs.concept), None, origin)
        if isinstance(rhs, RangeRestriction):
            return self._pair_restriction(x, self.var(rhs.role), None, self.var(rhs.concept), origin)
        if isinstance(rhs, ConcreteRangeRestriction):
            return self._pair_restriction(x, self.var(rhs.role), None, self.var(rhs.data), origin)
        if isinstance(rhs, Restriction):
            return self._pair_restriction(x, self.var(rhs.role), self.var(rhs.domain),
                                          self.var(rhs.range), origin)
        if isinstance(rhs, ConcreteRestriction):
            return self._pair_restriction(x, self.var(rhs.role), self.var(rhs.concept),
                                          self.var(rhs.data), origin)
        if isinstance(rhs, Identity):
            z1, z2 = self._z(2)
            c = self.var(rhs.concept)
            return self._forall((z1, z2), [[neg(Mem3(z1, z2, x)), pos(Mem1(z1, c))],
                                           [neg(Mem3(z1, z2, x)), pos(Mem1(z2, c))],
                                           [neg(Mem3(z1, z2, x)), pos(Eq(z1, z2))],
                                           [neg(Mem1(z1, c)), neg(Mem1(z2, c)), neg(Eq(z1, z2)),
                                            pos(Mem3(z1, z2, x))]], origin)
        if isinstance(rhs, Product):
            z1, z2 = self._z(2)
            c1, c2 = self.var(rhs.left), self.var(rhs.right)
            return self._forall((z1, z2), [[neg(Mem3(z1, z2, x)), pos(Mem1(z1, c1))],
                                           [neg(Mem3(z1, z2, x)), pos(Mem1(z2, c2))],
                                           [neg(Mem1(z1, c1)), neg(Mem1(z2, c2)), pos(Mem3(z1, z2, x))]],
                                origin)
        raise TranslationError(f"unsupported role definition {type(rhs).__name__}")

    def _data_equivalence(self, s: DataTermEquivalence, origin: str) -> Formula:
        x, rhs = self.var(s.left), s.right
        if isinstance(rhs, DataEnumeration):
            return self._enumerated(x, [self.obj(c) for c in rhs.constants], origin)
        if isinstance(rhs, (DatatypeRef, FacetExpression, DataTermName)):
            return self._set_equiv(x, self.var(rhs), origin)
        if isinstance(rhs, (DataNot, DataAnd, DataOr)):
            return self._set_boolean(x, rhs, origin, self.D)
        raise TranslationError(f"unsupported data-term definition {type(rhs).__name__}")

    def _chain(self, chain: List[SetVariable], sup: SetVariable, origin: str) -> Formula:
        z, *hops = self._z(len(chain) + 1)
        path = [z, *hops]
        clause = [neg(Mem3(path[i], path[i + 1], r)) for i, r in enumerate(chain)]
        clause.append(pos(Mem3(z, path[-1], sup)))
        return self._forall(path, [clause], origin)

    def _property(self, kind: RoleCharacteristic, r: SetVariable, origin: str) -> Formula:
        if kind is RoleCharacteristic.TRA:
            return self._chain([r, r], r, origin)
        if kind in (RoleCharacteristic.REF, RoleCharacteristic.IRREF):
            (z,) = self._z(1)
            if kind is RoleCharacteristic.IRREF:
                return self._forall((z,), [[neg(Mem3(z, z, r))]], origin)
            clause = [pos(Mem3(z, z, r))]
            if not self.verbatim:
                clause.append(neg(Mem1(z, self.I)))
            return self._forall((z,), [clause], origin)
        if kind is RoleCharacteristic.FUN:
            z1, z2, z3 = self._z(3)
            return self._forall((z1, z2, z3), [[neg(Mem3(z1, z2, r)), neg(Mem3(z1, z3, r)),
                                                pos(Eq(z2, z3))]], origin)
        z1, z2 = self._z(2)
        if kind is RoleCharacteristic.SYM:
            return self._forall((z1, z2), [[neg(Mem3(z1, z2, r)), pos(Mem3(z2, z1, r))]], origin)
        return self._forall((z1, z2), [[neg(Mem3(z1, z2, r)), neg(Mem3(z2, z1, r))]], origin)

    def assertion(self, s: Statement) -> GroundLiteral:
        if isinstance(s, ConceptAssertion):
            return pos(Mem1(self.obj(s.individual), self.var(s.concept)))
        if isinstance(s, RoleAssertion):
            return GroundLiteral(not s.negated, Mem3(self.obj(s.subject), self.obj(s.object), self.var(s.role)))
        if isinstance(s, ConcreteRoleAssertion):
            return GroundLiteral(not s.negated, Mem3(self.obj(s.subject), self.obj(s.constant), self.var(s.role)))
        if isinstance(s, EqualityAssertion):
            return GroundLiteral(not s.negated, Eq(self.obj(s.left), self.obj(s.right)))
        if isinstance(s, DataAssertion):
            return pos(Mem1(self.obj(s.constant), self.var(s.term)))
        raise TranslationError(f"unsupported statement {type(s).__name__}")

    # -- constraint groups
    def zeta(self, psi: FacetExpression, z: SetVariable) -> Prop:
        """Membership of z in a facet expression, distributed over its Boolean structure."""
        def base(facet_name: str) -> Prop:
            return PLit(pos(Mem1(z, self.nm.facet(psi.datatype, facet_name))))
        return PAnd(tuple(POr(tuple(base(l.facet) if l.positive else PNot(base(l.facet)) for l in c))
                          for c in psi.clauses))

    def xi(self, sig: Signature) -> List[Formula]:
        I, D = self.I, self.D
        groups: List[Formula] = []

        # 1: individuals and data values partition the domain; both nonempty
        z, = self._z(1)
        z_, = self._z(1)
        xi1 = (self._forall((z,), [[neg(Mem1(z, I)), neg(Mem1(z, D))], [pos(Mem1(z, D)), pos(Mem1(z, I))]], "xi1")
               + self._forall((z_,), [[pos(Mem1(z_, I)), pos(Mem1(z_, D))]], "xi1")
               + Formula(ground=(pos(Mem1(self.nm.witness("I"), I)), pos(Mem1(self.nm.witness("D"), D)))))
        groups.append(xi1)

        # 2: Top is the individual universe, Bot is empty
        top, bot = self.nm.reserved("Top"), self.nm.reserved("Bot")
        z, = self._z(1)
        z_, = self._z(1)
        groups.append(self._forall((z,), [[neg(Mem1(z, I)), pos(Mem1(z, top))],
                                          [neg(Mem1(z, top)), pos(Mem1(z, I))]], "xi2")
                      + self._forall((z_,), [[neg(Mem1(z_, bot))]], "xi2"))

        # 3: concept names denote sets of individuals
        groups.append(self._union(self._subset(self.nm.concept(a), I, "xi3") for a in sorted(sig.concepts)))

        # 4: datatypes are nonempty, pairwise disjoint subsets of the data values
        datatypes = sorted(sig.datatypes)
        xi4 = [self._subset(self.nm.datatype(d), D, "xi4")
               + Formula(ground=(pos(Mem1(self.nm.witness(d), self.nm.datatype(d))),)) for d in datatypes]
        for di, dj in itertools.combinations(datatypes, 2):
            z, = self._z(1)
            xi4.append(self._forall((z,), [[neg(Mem1(z, self.nm.datatype(di))),
                                            neg(Mem1(z, self.nm.datatype(dj)))]], "xi4"))
        groups.append(self._union(xi4))

        # 5: per-datatype top and bottom
        xi5 = []
        for d in datatypes:
            xi5.append(self._set_equiv(self.nm.datatype(d), self.nm.facet(d, "⊤"), "xi5"))
            z, = self._z(1)
            xi5.append(self._forall((z,), [[neg(Mem1(z, self.nm.facet(d, "⊥")))]], "xi5"))
        groups.append(self._union(xi5))

        # 6: facets live inside their datatype
        groups.append(self._union(self._subset(self.nm.facet(d, f), self.nm.datatype(d), "xi6")
                                  for d, f in sorted(sig.facets)))

        # 7: U is exactly the set of pairs of individuals
        U = self.nm.role("U")
        z1, z2 = self._z(2)
        groups.append(self._forall((z1, z2), [[neg(Mem1(z1, I)), neg(Mem1(z2, I)), pos(Mem3(z1, z2, U))],
                                              [neg(Mem3(z1, z2, U)), pos(Mem1(z1, I))],
                                              [neg(Mem3(z1, z2, U)), pos(Mem1(z2, I))]], "xi7"))

        # 8, 9: role typing
        groups.append(self._union(self._pair_typing(self.nm.role(r), I, "xi8") for r in sorted(sig.abstract_roles)))
        groups.append(self._union(self._pair_typing(self.nm.concrete_role(t), D, "xi9")
                                  for t in sorted(sig.concrete_roles)))

        # 10: individuals and constants are typed
        ground = [pos(Mem1(self.nm.individual(a), I)) for a in sorted(sig.individuals)]
        ground += [pos(Mem1(self.nm.constant(c), self.nm.datatype(c.datatype)))
                   for c in sorted(sig.constants)]
        groups.append(Formula(ground=tuple(ground)))

        # 11: enumerations and nominals
        xi11 = [self._enumerated(self.nm.enumeration(e), [self.obj(c) for c in e.constants], "xi11")
                for e in sorted(sig.enumerations, key=lambda e: e.constants)]
        xi11 += [self._enumerated(self.nm.nominal(n), [self.obj(a) for a in n.individuals], "xi11")
                 for n in sorted(sig.nominals, key=lambda n: n.individuals)]
        groups.append(self._union(xi11))

        # 12: facet expressions
        xi12 = []
        for psi in sorted(sig.facet_expressions, key=lambda e: (e.datatype, e.clauses)):
            x = self.nm.facet_expression(psi)
            z, = self._z(1)
            body = self.zeta(psi, z)
            if not self.verbatim:
                body = PAnd((PLit(pos(Mem1(z, self.nm.datatype(psi.datatype)))), body))
            clauses = to_cnf(POr((PLit(neg(Mem1(z, x))), body))) + to_cnf(POr((PNot(body), PLit(pos(Mem1(z, x))))))
            xi12.append(Formula((PurelyUniversal((z,), clauses, "xi12"),)))
        groups.append(self._union(xi12))
        return groups

    def datatype_closure(self, sig: Signature, dmap: DatatypeMap) -> Formula:
        """Pin datatypes and facets to their declared constants."""
        parts = []
        for d in sorted(sig.datatypes):
            spec = dmap.spec(d)
            if spec is None:
                continue
            dvar = self.nm.datatype(d)
            members = [self.nm.constant(Constant(v, d)) for v in spec.constants]
            (z,) = self._z(1)
            parts.append(self._forall((z,), [[neg(Mem1(z, dvar))] + [pos(Eq(z, m)) for m in members]],
                                      "closure"))
            parts.append(Formula(ground=tuple(pos(Mem1(m, dvar)) for m in members)))
            parts.append(Formula(ground=tuple(neg(Eq(a, b)) for a, b in itertools.combinations(members, 2))))
            for f in sorted(sig.facets_of(d)):
                fvar = self.nm.facet(d, f)
                ext = [self.nm.constant(c) for c in dmap.extension(d, f)]
                if ext:
                    parts.append(self._enumerated(fvar, ext, "closure"))
                else:
                    (z,) = self._z(1)
                    parts.append(self._forall((z,), [[neg(Mem1(z, fvar))]], "closure"))
        return self._union(parts)

    def term_typing(self, sig: Signature) -> Formula:
        """Named data terms introduced by flattening denote sets of data values."""
        return self._union(self._subset(self.nm.data_term(t), self.D, "typing") for t in sorted(sig.data_terms))

    def _subset(self, x: SetVariable, y: SetVariable, origin: str) -> Formula:
        (z,) = self._z(1)
        return self._forall((z,), [[neg(Mem1(z, x)), pos(Mem1(z, y))]], origin)

    def _pair_typing(self, r: SetVariable, second: SetVariable, origin: str) -> Formula:
        z1, z2 = self._z(2)
        return self._forall((z1, z2), [[neg(Mem3(z1, z2, r)), pos(Mem1(z1, self.I))],
                                       [neg(Mem3(z1, z2, r)), pos(Mem1(z2, second))]], origin)

    @staticmethod
    def _union(parts: Iterable[Formula]) -> Formula:
        out = Formula()
        for p in parts:
            out = out + p
        return out

    # -- queries and substitutions
    def query(self, q: HOQuery) -> Tuple[GroundLiteral, ...]:
        out = []
        for literal in q.literals:
            atom = literal.atom
            if isinstance(atom, ConceptAtom):
                out.append(GroundLiteral(literal.positive, Mem1(self._arg(atom.arg), self._pred(atom.concept))))
            elif isinstance(atom, RoleAtom):
                out.append(GroundLiteral(literal.positive, Mem3(self._arg(atom.first), self._arg(atom.second),
                                                                self._pred(atom.role))))
            elif isinstance(atom, EqualityAtom):
                out.append(GroundLiteral(literal.positive, Eq(self._arg(atom.left), self._arg(atom.right))))
        return tuple(out)

    def _arg(self, arg) -> SetVariable:
        if isinstance(arg, QueryVariable):
            return self.nm.query_variable(arg)
        return self.obj(arg)

    def _pred(self, pred) -> SetVariable:
        if isinstance(pred, QueryVariable):
            return self.nm.query_variable(pred)
        return self.var(pred)


# ---------------------------------------------------------------- module API

def theta_statement(s: Statement, nm: NamingMap, *, verbatim_theta: bool = False) -> Formula:
    return Translator(nm, verbatim_theta=verbatim_theta).statement(s)


def xi_constraints(sig: Signature, nm: NamingMap) -> List[Formula]:
    return Translator(nm).xi(sig)


def zeta(psi: FacetExpression, nm: NamingMap, z: SetVariable) -> Tuple[Clause, ...]:
    """CNF clauses of `z in zeta(X_psi)`."""
    if not psi.clauses:
        raise InputError("facet expression with no clauses")
    return to_cnf(Translator(nm).zeta(psi, z))


def query_signature(q: HOQuery) -> Signature:
    individuals = set()
    nodes = []
    for literal in q.literals:
        atom = literal.atom
        if isinstance(atom, ConceptAtom):
            parts = (atom.concept, atom.arg)
        elif isinstance(atom, RoleAtom):
            parts = (atom.role, atom.first, atom.second)
        else:
            parts = (atom.left, atom.right)
        for p in parts:
            if isinstance(p, str):
                individuals.add(p)
            elif not isinstance(p, QueryVariable):
                nodes.append(p)
    scanned = signature_of(*nodes)
    return scanned.union(Signature(individuals=frozenset(individuals)))


def build_phi_kb(kb: KnowledgeBase, query: Optional[HOQuery] = None, *,
                 verbatim_theta: bool = False, close_datatypes: bool = True,
                 nm: Optional[NamingMap] = None) -> Tuple[Formula, NamingMap]:
    """The consistency formula of a flattened KB, plus the naming map that houses it."""
    nm = nm or NamingMap()
    translator = Translator(nm, verbatim_theta=verbatim_theta, close_datatypes=close_datatypes)
    sig = signature(kb)
    if query is not None:
        sig = sig.union(query_signature(query))

    phi = Formula()
    for s in kb.statements:
        phi = phi + translator.statement(s)
    for group in translator.xi(sig):
        phi = phi + group
    if close_datatypes:
        phi = phi + translator.datatype_closure(sig, kb.dmap)
    phi = phi + translator.term_typing(sig)

    unhoused = [v.name for v in phi.variables() if v not in nm]
    if unhoused:
        raise TranslationError(f"variables without a naming entry: {sorted(unhoused)}")
    logger.debug("phi_KB: %d universal(s), %d ground literal(s)", len(phi.universals), len(phi.ground))
    return phi, nm


def theta_query(q: HOQuery, nm: NamingMap) -> Tuple[GroundLiteral, ...]:
    return Translator(nm).query(q)


def theta_substitution(sigma: DLSubstitution, nm: NamingMap) -> dict:
    """Level-respecting set-variable mapping for a DL substitution."""
    out = {}
    for variable, entity in sigma.pairs:
        if isinstance(entity, Constant):
            key = ("constant", entity)
        elif isinstance(entity, ConceptName):
            key = ("concept", entity.name)
        elif isinstance(entity, RoleName):
            key = ("role", entity.name)
        elif isinstance(entity, ConcreteRoleName):
            key = ("concrete_role", entity.name)
        else:
            key = ("individual", entity)
        target = nm.lookup(key)
        if target is None:
            raise InputError(f"{variable.name} is bound to {entity!r}, which the KB does not name")
        out[nm.query_variable(variable)] = target
    return out


def render_formula(phi: Formula) -> str:
    """One conjunct per line, ground literals first."""
    return phi.render()
