import pytest

from error_logger import InputError
from kb_model import (
    AtMostInclusion,
    ConceptAssertion,
    ConceptEquivalence,
    ConceptName,
    ConceptNot,
    ConcreteRoleAssertion,
    ConcreteRoleName,
    Constant,
    DatatypeMap,
    EqualityAssertion,
    FacetExpression,
    FacetLiteral,
    KnowledgeBase,
    RoleAssertion,
    RoleCharacteristic,
    RoleName,
    RoleProperty,
    signature,
)
from naming import NamingMap
from query_model import ConceptAtom, DLSubstitution, EqualityAtom, HOLiteral, HOQuery, QueryVariable, RoleAtom, VariableSort
from setcalc import Eq, Mem1, Mem3, bound, neg, pos
from translator import build_phi_kb, theta_query, theta_statement, theta_substitution, xi_constraints, zeta

X = QueryVariable("?x", VariableSort.INDIVIDUAL)
CV = QueryVariable("?c", VariableSort.CONCEPT)


@pytest.fixture
def nm():
    return NamingMap()


def test_concept_assertion(nm):
    phi = theta_statement(ConceptAssertion("a", ConceptName("C")), nm)
    assert phi.universals == ()
    assert phi.ground == (pos(Mem1(nm.individual("a"), nm.concept("C"))),)


def test_negated_role_assertion(nm):
    phi = theta_statement(RoleAssertion("a", "b", RoleName("R"), negated=True), nm)
    assert phi.ground == (neg(Mem3(nm.individual("a"), nm.individual("b"), nm.role("R"))),)


def test_concrete_role_assertion_uses_the_constant(nm):
    c = Constant("1", "num")
    phi = theta_statement(ConcreteRoleAssertion("a", c, ConcreteRoleName("P")), nm)
    assert phi.ground == (pos(Mem3(nm.individual("a"), nm.constant(c), nm.concrete_role("P"))),)


def test_inequality_assertion(nm):
    phi = theta_statement(EqualityAssertion("a", "b", negated=True), nm)
    assert phi.ground == (neg(Eq(nm.individual("a"), nm.individual("b"))),)


def test_irreflexivity_is_one_clause(nm):
    (s,) = theta_statement(RoleProperty(RoleCharacteristic.IRREF, RoleName("R")), nm).universals
    (clause,) = s.matrix
    (z,) = s.bound
    assert clause.literals == (neg(Mem3(z, z, nm.role("R"))),)


def test_reflexivity_is_guarded_unless_verbatim(nm):
    ref = RoleProperty(RoleCharacteristic.REF, RoleName("R"))
    (guarded,) = theta_statement(ref, nm).universals
    (verbatim,) = theta_statement(ref, nm, verbatim_theta=True).universals
    assert len(guarded.matrix[0]) == 2
    assert len(verbatim.matrix[0]) == 1


def test_complement_cover_is_relativized_to_individuals(nm):
    s = ConceptEquivalence(ConceptName("A"), ConceptNot(ConceptName("B")))
    (guarded,) = theta_statement(s, nm).universals
    (z,) = guarded.bound
    assert any(neg(Mem1(z, nm.reserved("I"))) in c.literals for c in guarded.matrix)
    (verbatim,) = theta_statement(s, nm, verbatim_theta=True).universals
    assert all(len(c) == 2 for c in verbatim.matrix)


def test_at_most_cardinality(nm):
    s = AtMostInclusion(ConceptName("C"), 1, RoleName("R"), ConceptName("D"))
    (single,) = theta_statement(s, nm).universals
    assert len(single.bound) == 3
    assert len(single.matrix) == 1
    (verbatim,) = theta_statement(s, nm, verbatim_theta=True).universals
    assert len(verbatim.matrix) == 2


def test_phi_kb_contains_the_constraint_groups(nm):
    kb = KnowledgeBase.of(ConceptAssertion("a", ConceptName("C")))
    phi, nm = build_phi_kb(kb, nm=nm)
    a, C, I = nm.individual("a"), nm.concept("C"), nm.reserved("I")
    assert pos(Mem1(a, C)) in phi.ground
    assert pos(Mem1(a, I)) in phi.ground
    origins = {s.origin for s in phi.universals}
    assert {"xi1", "xi2", "xi3", "xi7", "xi8"} <= origins
    (typing,) = [s for s in phi.universals if s.origin == "xi3" and C in s.matrix[0].variables()]
    (z,) = typing.bound
    assert typing.matrix[0].literals == (neg(Mem1(z, C)), pos(Mem1(z, I)))


def test_datatype_closure_pins_constants(nm):
    kb = KnowledgeBase.of(ConcreteRoleAssertion("a", Constant("1", "num"), ConcreteRoleName("P")),
                          dmap=DatatypeMap.build({"num": ("1", "2")}))
    closed, nm = build_phi_kb(kb, nm=nm)
    one, two = nm.constant(Constant("1", "num")), nm.constant(Constant("2", "num"))
    assert neg(Eq(one, two)) in closed.ground
    assert pos(Mem1(two, nm.datatype("num"))) in closed.ground
    open_, _ = build_phi_kb(kb, close_datatypes=False, nm=NamingMap())
    assert not any(s.origin == "closure" for s in open_.universals)


def test_query_signature_is_merged(nm):
    kb = KnowledgeBase.of(ConceptAssertion("a", ConceptName("C")))
    phi, nm = build_phi_kb(kb, HOQuery.of(ConceptAtom(ConceptName("E"), "b")), nm=nm)
    assert pos(Mem1(nm.individual("b"), nm.reserved("I"))) in phi.ground
    assert nm.lookup(("concept", "E")) is not None


def test_theta_on_queries(nm):
    q = HOQuery.of(ConceptAtom(ConceptName("C"), X), ConceptAtom(CV, "a"), EqualityAtom(X, "b"))
    templates = theta_query(q, nm)
    x, c = nm.query_variable(X), nm.query_variable(CV)
    assert templates == (pos(Mem1(x, nm.concept("C"))),
                         pos(Mem1(nm.individual("a"), c)),
                         pos(Eq(x, nm.individual("b"))))
    assert x.level == 0 and c.level == 1


def test_negative_query_literal(nm):
    (t,) = theta_query(HOQuery.of(HOLiteral(RoleAtom(RoleName("R"), X, "a"), positive=False)), nm)
    assert t == neg(Mem3(nm.query_variable(X), nm.individual("a"), nm.role("R")))


def test_theta_substitution(nm):
    nm.individual("a")
    nm.concept("C")
    sigma = DLSubstitution.of({X: "a", CV: ConceptName("C")})
    assert theta_substitution(sigma, nm) == {nm.query_variable(X): nm.individual("a"),
                                             nm.query_variable(CV): nm.concept("C")}


def test_theta_substitution_rejects_unknown_entities(nm):
    with pytest.raises(InputError):
        theta_substitution(DLSubstitution.of({X: "nobody"}), nm)


def test_zeta_of_a_facet_clause(nm):
    psi = FacetExpression("num", ((FacetLiteral("small"), FacetLiteral("big", False)),))
    z = bound(1)
    (clause,) = zeta(psi, nm, z)
    assert set(clause.literals) == {pos(Mem1(z, nm.facet("num", "small"))),
                                    neg(Mem1(z, nm.facet("num", "big")))}


def test_xi_constraints_has_twelve_groups(nm):
    sig = signature(KnowledgeBase.of(ConceptAssertion("a", ConceptName("C"))))
    groups = xi_constraints(sig, nm)
    assert len(groups) == 12
    assert {u.origin for u in groups[6].universals} == {"xi7"}
    assert pos(Mem1(nm.individual("a"), nm.reserved("I"))) in groups[9].ground
