from frontend import parse_kb, parse_query
import itertools
import random

import pytest

from hocqa_engine import RawAnswer, answer_branch, match_literal, seeded_literals
from ke_tableau import Branch
from kb_model import ConceptName, Constant, RoleName
from query_model import QueryVariable, VariableSort
from setcalc import Eq, GroundLiteral, Mem1, Mem3, VarKind, neg, pos, var0, var1, var3

X = QueryVariable("?x", VariableSort.INDIVIDUAL)


def answers(pipeline, kb_text, query_text):
    kb = parse_kb(kb_text)
    return pipeline.answer(kb, parse_query(query_text, kb))


def test_instance_query(pipeline):
    result = answers(pipeline, "a : C;", "C(?x)")
    assert result.consistent
    assert result.records() == [{"?x": "a"}]


def test_inconsistent_kb_has_no_answers(pipeline):
    result = answers(pipeline, "a : C; a : ~C;", "C(?x)")
    assert not result.consistent
    assert len(result) == 0


def test_ground_query_answer_is_epsilon(pipeline):
    holds = answers(pipeline, "a : C;", "C(a)")
    assert holds.records() == [{}]
    fails = answers(pipeline, "concept C, E; a : C; a : ~E;", "E(a)")
    assert fails.records() == []


def test_role_variables_include_the_universal_role(pipeline):
    result = answers(pipeline, "(a, b) : R;", "?r(a, b)")
    assert {r["?r"] for r in result.records()} == {"R", "U"}


def test_concept_variables_skip_internal_sets(pipeline):
    result = answers(pipeline, "concept C, D; C <= D; a : C;", "?c(a)")
    assert {r["?c"] for r in result.records()} == {"C", "D"}


def test_include_internal_exposes_reserved_sets(pipeline):
    pipeline.settings.include_internal = True
    result = answers(pipeline, "a : C;", "?c(a)")
    names = {r["?c"] for r in result.records()}
    assert "C" in names and len(names) > 1


def test_equal_individuals_are_both_answers(pipeline):
    result = answers(pipeline, "a = b; a : C;", "C(?x)")
    assert result.records() == [{"?x": "a"}, {"?x": "b"}]
    (_, classes), _ = result.classes
    assert classes == (("?x", ("a", "b")),)


def test_equality_atoms_match_reflexive_seeds(pipeline):
    result = answers(pipeline, "a = b; a : C;", "?x = b")
    assert {r["?x"] for r in result.records()} == {"a", "b"}


def test_role_fillers(pipeline):
    result = answers(pipeline, "(a, b) : R; (b, c) : R; (a, a) : ~R; (a, c) : ~R;", "R(a, ?y)")
    assert result.records() == [{"?y": "b"}]


def test_undecided_fillers_are_possible_answers(pipeline):
    result = answers(pipeline, "(a, b) : R; (b, c) : R;", "R(a, ?y)")
    assert {r["?y"] for r in result.records()} == {"a", "b", "c"}


def test_conjunction_joins_on_shared_variables(pipeline):
    text = "concept C; (a, b) : R; (b, c) : R; c : C; a : ~C; b : ~C; (a, c) : ~R; (b, a) : ~R;"
    result = answers(pipeline, text, "R(?x, ?y) & C(?y) & !R(?y, ?x)")
    assert result.records() == [{"?x": "b", "?y": "c"}]


def test_data_values_decode_to_constants(pipeline):
    kb_text = """
        datatype num { constants: "1", "2"; }
        concrete age;
        (a, "1"^num) : age;
        (a, "2"^num) : ~age;
    """
    result = answers(pipeline, kb_text, "age(a, ?v)")
    assert result.records() == [{"?v": '"1"^num'}]
    assert result.decoded[0].get(QueryVariable("?v", VariableSort.INDIVIDUAL)) == Constant("1", "num")


def test_concept_answers_are_concept_names(pipeline):
    result = answers(pipeline, "a : C;", "?c(a)")
    assert [s.pairs[0][1] for s in result.decoded] == [ConceptName("C")]


def test_role_answers_are_role_names(pipeline):
    result = answers(pipeline, "(a, b) : R;", "?r(a, b)")
    assert RoleName("R") in {s.pairs[0][1] for s in result.decoded}


def test_answering_fills_the_complexity_report(pipeline):
    kb = parse_kb("(a, b) : R; (b, c) : R; c : C;")
    q = parse_query("R(?x, ?y) & C(?y)", kb)
    result = pipeline.answer(kb, q)
    report = pipeline.prepare(kb, q).report
    assert report.h == 2
    assert report.decision_nodes == result.decision_nodes > 0
    assert report.s >= 1
    assert report.disjunctions <= report.disjunction_bound


def test_seeded_literals_add_reflexive_equalities():
    a = var0(VarKind.INDIVIDUAL, "x_a")
    branch = Branch("0")
    branch.add(pos(Mem1(a, var1(VarKind.CONCEPT, "C"))))
    assert pos(Eq(a, a)) in seeded_literals(branch)


def test_equalities_match_in_both_orientations():
    a, b = var0(VarKind.INDIVIDUAL, "x_a"), var0(VarKind.INDIVIDUAL, "x_b")
    q = var0(VarKind.QUERY, "x_?x")
    found = match_literal(pos(Eq(q, b)), [pos(Eq(a, b))])
    assert found == [((q, a),)]


def test_raw_answer_merges_sigma_and_binding():
    a, b = var0(VarKind.INDIVIDUAL, "x_a"), var0(VarKind.INDIVIDUAL, "x_b")
    q = var0(VarKind.QUERY, "x_?x")
    raw = RawAnswer("0", ((b, a),), ((q, a),), 0)
    assert raw.as_dict() == {b: a, q: a}


def test_renaming_a_concept_keeps_the_answers(pipeline):
    first = answers(pipeline, "concept C, D; C <= D; a : C; (a, b) : R;", "C(?x)")
    second = answers(pipeline, "concept C, A; C <= A; a : C; (a, b) : R;", "C(?x)")
    assert first.records() == second.records() == [{"?x": "a"}, {"?x": "b"}]


@pytest.mark.parametrize("kb_text,query_text", [
    ("concept C, D; C <= D; a : C; (a, b) : R;", "C(?x)"),
    ("concept A; role R; exists R . A <= A; b != a;", "R(b, a)"),
    ("concept C, D; a : C; b : D;", "!C(?x)"),
    ("concept C; role R; C <= forall R . C; a : C; (a, b) : R;", "?c(b)"),
    ("concept C; role R; (a, b) : R; Sym(R);", "R(?x, ?y) & !R(?y, ?x)"),
])
def test_answer_set_equals_the_oracle(pipeline, kb_text, query_text):
    kb = parse_kb(kb_text)
    q = parse_query(query_text, kb)
    assert set(pipeline.answer(kb, q).decoded) == set(pipeline.oracle_answers(kb, q))


def test_ground_role_atom_left_open_by_the_tableau(pipeline):
    result = answers(pipeline, "concept A; role R; exists R . A <= A; b != a;", "R(b, a)")
    assert result.records() == [{}]


def test_contradictory_cuts_on_one_path_are_rejected(pipeline):
    assert answers(pipeline, "a : C;", "C(?x) & !C(?x)").records() == []


def test_semantic_equality_answers_inequalities(pipeline):
    text, q = "concept C; a : C; b : C;", "C(?x) & ?x != b"
    assert answers(pipeline, text, q).records() == []
    pipeline.settings.semantic_eq = True
    assert answers(pipeline, text, q).records() == [{"?x": "a"}]


def test_answers_carry_branch_and_leaf(pipeline):
    result = answers(pipeline, "a : C | D;", "C(?x)")
    open_ids = {b.id for b in pipeline.prepare(parse_kb("a : C | D;"), parse_query("C(?x)")).tableau.open_branches()}
    assert len(result.provenance) == len(result.decoded) == 1
    branch, leaf = result.provenance[0]
    assert branch in open_ids
    assert leaf >= 0


XS = [var0(VarKind.INDIVIDUAL, n) for n in ("x_a", "x_b", "x_c")]
CS = [var1(VarKind.CONCEPT, n) for n in ("C", "D")]
RS = [var3(VarKind.ROLE, "R")]
QX, QY = var0(VarKind.QUERY, "x_?x"), var0(VarKind.QUERY, "x_?y")
QC, QR = var1(VarKind.QUERY, "X_?c"), var3(VarKind.QUERY, "X_?r")
POOLS = {0: tuple(XS), 1: tuple(CS), 3: tuple(RS)}


def _random_branch(rng):
    atoms = ([Mem1(x, c) for x in XS for c in CS] + [Mem3(x, y, r) for x in XS for y in XS for r in RS]
             + [Eq(x, y) for x, y in itertools.combinations(XS, 2)])
    branch = Branch("0")
    for atom in rng.sample(atoms, rng.randint(0, 10)):
        branch.add(GroundLiteral(rng.random() < 0.6, atom))
    return branch


def _random_template(rng):
    arg = lambda: rng.choice(XS + [QX, QY])
    shape = rng.randrange(3)
    if shape == 0:
        atom = Mem1(arg(), rng.choice(CS + [QC]))
    elif shape == 1:
        atom = Mem3(arg(), arg(), rng.choice(RS + [QR]))
    else:
        atom = Eq(arg(), arg())
    return GroundLiteral(rng.random() < 0.7, atom)


def _all_bindings(templates):
    placeholders = sorted({v for t in templates for v in t.variables() if v.is_placeholder})
    for values in itertools.product(*(POOLS[p.level] for p in placeholders)):
        yield dict(zip(placeholders, values))


def _emitted(found):
    return {tuple(sorted(a.binding)) for a in found.answers}


def test_literal_matching_emits_exactly_the_bindings_found_on_the_branch():
    rng = random.Random(4)
    for _ in range(10_000):
        branch = _random_branch(rng)
        templates = [_random_template(rng) for _ in range(rng.randint(1, 3))]
        present = set(seeded_literals(branch))
        expected = {tuple(sorted(rho.items())) for rho in _all_bindings(templates)
                    if all(t.rename(rho) in present for t in templates)}
        assert _emitted(answer_branch(branch, templates)) == expected


def _consistent_cut(branch, present, instances):
    for literal in instances:
        if literal in present:
            continue
        if literal.is_equality or literal.complement() in branch:
            return False
    return not any(l.complement() in instances for l in instances)


def test_cut_matching_emits_the_bindings_some_extension_of_the_branch_holds():
    rng = random.Random(9)
    for _ in range(3_000):
        branch = _random_branch(rng)
        templates = [_random_template(rng) for _ in range(rng.randint(1, 3))]
        present = set(seeded_literals(branch))
        expected = set()
        for rho in _all_bindings(templates):
            instances = {t.rename(rho) for t in templates}
            if _consistent_cut(branch, present, instances):
                expected.add(tuple(sorted(rho.items())))
        assert _emitted(answer_branch(branch, templates, pools=POOLS)) == expected
