import pytest

from error_logger import ResourceBoundError
from frontend import parse_kb, parse_query
from oracle import UnionFind, ground, model_to_interpretation, satisfiable, satisfiable_formula
from setcalc import Clause, Eq, Formula, Mem1, PurelyUniversal, VarKind, bound, evaluate, neg, pos, var0, var1

A = var0(VarKind.INDIVIDUAL, "x_a")
B = var0(VarKind.INDIVIDUAL, "x_b")
C = var1(VarKind.CONCEPT, "C")
D = var1(VarKind.CONCEPT, "D")


def test_single_membership_is_satisfiable():
    assert satisfiable([pos(Mem1(A, C))])


def test_contradiction_is_unsatisfiable():
    assert not satisfiable([pos(Mem1(A, C)), neg(Mem1(A, C))])


def test_equality_congruence():
    assert not satisfiable([pos(Eq(A, B)), pos(Mem1(A, C)), neg(Mem1(B, C))])
    assert satisfiable([neg(Eq(A, B)), pos(Mem1(A, C)), neg(Mem1(B, C))])


def test_reflexive_disequality_is_unsatisfiable():
    assert not satisfiable([neg(Eq(A, A))])


def test_clauses_force_literals():
    clauses = [Clause.of(neg(Mem1(A, C)), pos(Mem1(A, D)))]
    assert not satisfiable([pos(Mem1(A, C)), neg(Mem1(A, D))], clauses)


def test_models_satisfy_the_formula():
    z = bound(1)
    phi = Formula((PurelyUniversal((z,), (Clause.of(neg(Mem1(z, C)), pos(Mem1(z, D))),)),),
                  (pos(Mem1(A, C)), pos(Eq(A, B))))
    result = satisfiable_formula(phi)
    assert result.sat
    m = model_to_interpretation(result.model, phi)
    assert evaluate(m, phi)


def test_ground_instantiates_over_free_individuals():
    z = bound(1)
    phi = Formula((PurelyUniversal((z,), (Clause.of(pos(Mem1(z, C))),)),), (pos(Mem1(A, D)), pos(Mem1(B, D))))
    literals, clauses = ground(phi)
    assert len(literals) == 2
    assert set(clauses) == {Clause.of(pos(Mem1(A, C))), Clause.of(pos(Mem1(B, C)))}


def test_atom_bound():
    with pytest.raises(ResourceBoundError):
        satisfiable([pos(Mem1(A, C)), pos(Mem1(B, C)), pos(Mem1(A, D))], atom_bound=2)


def test_union_find_keeps_the_smaller_representative():
    uf = UnionFind()
    uf.union(B, A)
    assert uf.find(B) == A


def test_oracle_agrees_on_kb_consistency(pipeline):
    assert pipeline.oracle_consistency(parse_kb("a : C;")).sat
    assert not pipeline.oracle_consistency(parse_kb("a : C; a : ~C;")).sat


def test_oracle_answers(pipeline):
    kb = parse_kb("a : C;")
    answers = pipeline.oracle_answers(kb, parse_query("C(?x)", kb))
    assert [{v.name: e for v, e in s.pairs} for s in answers] == [{"?x": "a"}]


@pytest.mark.parametrize("text", ["D(?x)", "R(a, ?y)", "?c(a)", "?r(a, b)", "R(?x, ?y) & !D(?y)"])
def test_engine_answers_are_oracle_answers(pipeline, text):
    kb = parse_kb("concept C, D; C <= D; a : C; (a, b) : R;")
    q = parse_query(text, kb)
    assert set(pipeline.answer(kb, q).decoded) == set(pipeline.oracle_answers(kb, q))


def _names(answers):
    return sorted(e for s in answers for _, e in s.pairs)


# Equality atoms match branch literals only: an identification or separation
# left open by the tableau is not assumed.
@pytest.mark.parametrize("text,engine,oracle", [
    ("C(?x) & ?x != b", [], ["a"]),
    ("?x = b", ["b"], ["a", "b"]),
])
def test_equality_atoms_are_a_known_gap(pipeline, text, engine, oracle):
    kb = parse_kb("concept C; a : C; b : C;")
    q = parse_query(text, kb)
    assert _names(pipeline.answer(kb, q).decoded) == engine
    assert _names(pipeline.oracle_answers(kb, q)) == oracle
    assert set(pipeline.answer(kb, q).decoded) <= set(pipeline.oracle_answers(kb, q))


def test_semantic_equality_closes_the_disequality_gap(pipeline):
    kb = parse_kb("concept C; a : C; b : C;")
    q = parse_query("C(?x) & ?x != b", kb)
    pipeline.settings.semantic_eq = True
    assert set(pipeline.answer(kb, q).decoded) == set(pipeline.oracle_answers(kb, q))
