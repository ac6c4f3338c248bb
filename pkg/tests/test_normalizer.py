from kb_model import (
    ConceptAnd,
    ConceptAssertion,
    ConceptEquivalence,
    ConceptInclusion,
    ConceptName,
    ConceptNot,
    ConceptOr,
    KnowledgeBase,
    children,
)
from normalizer import Flattener, flatten, flatten_kb, flatten_query, is_atomic
from query_model import ConceptAtom, HOQuery, QueryVariable, VariableSort

A, B, C, D = (ConceptName(n) for n in "ABCD")
X = QueryVariable("?x", VariableSort.INDIVIDUAL)


def test_complex_assertion_gets_a_fresh_name():
    flat, _ = flatten(KnowledgeBase.of(ConceptAssertion("a", ConceptNot(C))))
    n1 = ConceptName("$N1")
    assert flat.abox == (ConceptAssertion("a", n1),)
    assert flat.tbox == (ConceptEquivalence(n1, ConceptNot(C)),)


def test_equal_subterms_share_one_name():
    kb = KnowledgeBase.of(ConceptAssertion("a", ConceptNot(C)), ConceptAssertion("b", ConceptNot(C)))
    flat, _ = flatten(kb)
    assert len(flat.tbox) == 1
    assert {s.concept for s in flat.abox} == {ConceptName("$N1")}


def test_definitions_are_one_level():
    kb = KnowledgeBase.of(ConceptInclusion(ConceptAnd(A, ConceptOr(B, ConceptNot(C))), D))
    flat, _ = flatten(kb)
    inclusion, *definitions = flat.tbox
    assert is_atomic(inclusion.sub) and inclusion.sup == D
    assert len(definitions) == 3
    for d in definitions:
        assert isinstance(d, ConceptEquivalence) and is_atomic(d.left)
        assert all(is_atomic(arg) for arg in children(d.right))


def test_query_shares_the_kb_definitions():
    kb = KnowledgeBase.of(ConceptAssertion("a", ConceptNot(C)))
    flat, q = flatten(kb, HOQuery.of(ConceptAtom(ConceptNot(C), X)))
    assert q.literals[0].atom.concept == flat.abox[0].concept


def test_flat_kb_is_left_alone():
    kb = KnowledgeBase.of(ConceptInclusion(A, B), ConceptAssertion("a", A))
    flat, q = flatten(kb)
    assert flat == kb
    assert q is None


def test_kb_and_query_flattened_with_one_table():
    flattener = Flattener()
    flat = flatten_kb(KnowledgeBase.of(ConceptAssertion("a", ConceptNot(C))), flattener)
    q = flatten_query(HOQuery.of(ConceptAtom(ConceptNot(C), X)), flattener)
    assert flat.abox == (ConceptAssertion("a", ConceptName("$N1")),)
    assert q == HOQuery.of(ConceptAtom(ConceptName("$N1"), X))
