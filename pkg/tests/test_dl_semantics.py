from dl_semantics import DLInterpretation, from_4lqs_model, holds, satisfies, satisfies_kb, term_extension
from frontend import parse_kb
from ke_tableau import branch_model
from kb_model import (
    ConceptAssertion,
    ConceptName,
    ConceptNot,
    Inverse,
    RoleAssertion,
    RoleCharacteristic,
    RoleName,
    RoleProperty,
)
from query_model import ConceptAtom, DLSubstitution, HOQuery, QueryVariable, RoleAtom, VariableSort

C, R = ConceptName("C"), RoleName("R")
X = QueryVariable("?x", VariableSort.INDIVIDUAL)

I = DLInterpretation(
    individuals=frozenset({1, 2}),
    data_values=frozenset(),
    concepts={"C": frozenset({1})},
    roles={"R": frozenset({(1, 2)})},
    individual_map={"a": 1, "b": 2},
)


def test_concept_extensions():
    assert term_extension(I, ConceptNot(C)) == {2}
    assert term_extension(I, Inverse(R)) == {(2, 1)}
    assert term_extension(I, RoleName("U")) == {(1, 1), (1, 2), (2, 1), (2, 2)}


def test_assertions():
    assert satisfies(I, ConceptAssertion("a", C))
    assert not satisfies(I, ConceptAssertion("b", C))
    assert satisfies(I, RoleAssertion("b", "a", R, negated=True))


def test_role_properties():
    assert not satisfies(I, RoleProperty(RoleCharacteristic.SYM, R))
    assert satisfies(I, RoleProperty(RoleCharacteristic.IRREF, R))
    assert satisfies(I, RoleProperty(RoleCharacteristic.ASYM, R))


def test_query_truth():
    q = HOQuery.of(ConceptAtom(C, X), RoleAtom(R, X, "b"))
    assert holds(I, q, DLSubstitution.of({X: "a"}))
    assert not holds(I, q, DLSubstitution.of({X: "b"}))


def test_open_branches_read_back_as_models(pipeline):
    kb = parse_kb("concept C, D; C <= D; a : C; (a, b) : R;")
    prepared = pipeline.prepare(kb)
    assert prepared.tableau.open_branches()
    for branch in prepared.tableau.open_branches():
        model = branch_model(branch, prepared.phi)
        dl = from_4lqs_model(model, prepared.nm, prepared.flat_kb)
        assert satisfies_kb(dl, prepared.flat_kb)
