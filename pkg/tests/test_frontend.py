import pytest

from error_logger import InputError
from frontend import parse_kb, parse_query, print_kb, print_query
from kb_model import (
    ConceptAssertion,
    ConceptInclusion,
    ConceptName,
    ConceptNot,
    ConcreteFunctional,
    ConcreteNot,
    ConcreteRoleAssertion,
    ConcreteRoleName,
    Constant,
    EqualityAssertion,
    ExistsInclusion,
    ForAllInclusion,
    HasValue,
    Nominal,
    RoleAssertion,
    RoleChain,
    RoleInclusion,
    RoleName,
    RoleProperty,
    RoleCharacteristic,
)
from query_model import ConceptAtom, EqualityAtom, QueryVariable, RoleAtom, VariableSort

FAMILY = """
    # small family ontology
    concept Person, Parent;
    role hasChild, hasParent;
    concrete age;
    datatype num { constants: "1", "2"; facets: small = {"1"}; }

    exists hasChild . Person <= Parent;
    Parent <= forall hasChild . Person;
    hasParent == inv(hasChild);
    chain(hasParent, hasParent) <= hasParent;
    Irref(hasChild);
    Fun(age);
    alice : Parent;
    (alice, bob) : hasChild;
    (alice, "2"^num) : age;
    alice != bob;
"""


def test_parse_family():
    kb = parse_kb(FAMILY)
    assert ExistsInclusion(RoleName("hasChild"), ConceptName("Person"), ConceptName("Parent")) in kb.tbox
    assert ForAllInclusion(ConceptName("Parent"), RoleName("hasChild"), ConceptName("Person")) in kb.tbox
    assert RoleChain((RoleName("hasParent"), RoleName("hasParent")), RoleName("hasParent")) in kb.rbox
    assert RoleProperty(RoleCharacteristic.IRREF, RoleName("hasChild")) in kb.rbox
    assert ConcreteFunctional(ConcreteRoleName("age")) in kb.rbox
    assert kb.abox == (
        ConceptAssertion("alice", ConceptName("Parent")),
        RoleAssertion("alice", "bob", RoleName("hasChild")),
        ConcreteRoleAssertion("alice", Constant("2", "num"), ConcreteRoleName("age")),
        EqualityAssertion("alice", "bob", negated=True),
    )
    assert kb.dmap.datatypes == frozenset({"num"})


def test_sort_defaults_to_concept():
    kb = parse_kb("C <= D;")
    assert kb.tbox == (ConceptInclusion(ConceptName("C"), ConceptName("D")),)


def test_role_sort_flows_through_inclusion():
    kb = parse_kb("R <= S; (a, b) : R;")
    assert kb.rbox == (RoleInclusion(RoleName("R"), RoleName("S")),)


def test_negated_role_assertion():
    (s,) = parse_kb("(a, b) : ~R;").abox
    assert s == RoleAssertion("a", "b", RoleName("R"), negated=True)


def test_nominals_and_values():
    kb = parse_kb("a : {a, b}; exists R . {b} <= C;")
    assert kb.abox == (ConceptAssertion("a", Nominal(("a", "b"))),)
    assert kb.tbox == (ConceptInclusion(HasValue(RoleName("R"), "b"), ConceptName("C")),)


def test_complement_assertion():
    (s,) = parse_kb("a : ~C;").abox
    assert s == ConceptAssertion("a", ConceptNot(ConceptName("C")))


@pytest.mark.parametrize("text", [
    "C <= exists R . D;",
    "forall R . C <= D;",
    "a : C & exists R . D;",
])
def test_quantifier_placement_is_checked(text):
    with pytest.raises(InputError, match="only allowed"):
        parse_kb(text)


@pytest.mark.parametrize("text", [
    "concept C; (a, b) : C;",
    "role R; a : R;",
    "facets(num: small) <= C;",
])
def test_ill_sorted_input(text):
    with pytest.raises(InputError):
        parse_kb(text)


def test_syntax_error_carries_position():
    with pytest.raises(InputError) as err:
        parse_kb("concept C;\na : ;")
    assert err.value.span.line == 2
    assert err.value.expected


def test_parse_query():
    q = parse_query('C(?x) & !D(?x) & ?c(a) & ?r(a, b) & age(a, "1"^num) & ?x != b')
    x = QueryVariable("?x", VariableSort.INDIVIDUAL)
    atoms = [(l.atom, l.positive) for l in q.literals]
    assert atoms == [
        (ConceptAtom(ConceptName("C"), x), True),
        (ConceptAtom(ConceptName("D"), x), False),
        (ConceptAtom(QueryVariable("?c", VariableSort.CONCEPT), "a"), True),
        (RoleAtom(QueryVariable("?r", VariableSort.ABSTRACT_ROLE), "a", "b"), True),
        (RoleAtom(ConcreteRoleName("age"), "a", Constant("1", "num")), True),
        (EqualityAtom(x, "b"), False),
    ]


def test_query_uses_kb_sorts():
    kb = parse_kb('datatype num { constants: "1"; } (a, "1"^num) : age;')
    q = parse_query("[~age](a, ?v)", kb)
    assert q.literals[0].atom.role == ConcreteNot(ConcreteRoleName("age"))


def test_query_variable_positions_clash():
    with pytest.raises(InputError, match="conflicting positions"):
        parse_query("?x(a) & C(?x)")


def test_print_parse_round_trip():
    kb = parse_kb(FAMILY)
    assert parse_kb(print_kb(kb)) == kb


def test_print_query_round_trip():
    q = parse_query("C(?x) & !R(?x, ?y) & ?c(?y) & [C | ~D](a) & ?x = b")
    assert parse_query(print_query(q)) == q
