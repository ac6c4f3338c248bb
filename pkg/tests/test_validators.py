import pytest

from kb_model import (
    ConceptAssertion,
    ConceptName,
    ConcreteRoleAssertion,
    ConcreteRoleName,
    Constant,
    DatatypeMap,
    KnowledgeBase,
    RoleAssertion,
    RoleChain,
    RoleName,
)
from validators import KnowledgeBaseValidator


@pytest.fixture
def validator():
    return KnowledgeBaseValidator()


def codes(result):
    return {d.code for d in result['errors']}


def test_valid_kb(validator):
    result = validator.validate_kb(KnowledgeBase.of(ConceptAssertion("a", ConceptName("C"))))
    assert result['valid']
    assert result['errors'] == []
    assert result['message'] == "1 statement(s) ok"


def test_undeclared_datatype(validator):
    kb = KnowledgeBase.of(ConcreteRoleAssertion("a", Constant("1", "num"), ConcreteRoleName("P")))
    result = validator.validate_kb(kb)
    assert not result['valid']
    assert "UNDECLARED_DATATYPE" in codes(result)


def test_undeclared_constant(validator):
    kb = KnowledgeBase.of(ConcreteRoleAssertion("a", Constant("3", "num"), ConcreteRoleName("P")),
                          dmap=DatatypeMap.build({"num": ("1", "2")}))
    assert "UNDECLARED_CONSTANT" in codes(validator.validate_kb(kb))


def test_constant_sets_must_be_disjoint(validator):
    kb = KnowledgeBase.of(dmap=DatatypeMap.build({"num": ("1",), "int": ("1",)}))
    assert "DMAP_OVERLAP" in codes(validator.validate_kb(kb))


def test_facets_stay_inside_their_datatype(validator):
    dmap = DatatypeMap.build({"num": ("1", "2")}, {"num": {"small": ("1", "7")}})
    assert "DMAP_FACET" in codes(validator.validate_kb(KnowledgeBase.of(dmap=dmap)))


def test_name_used_with_two_sorts(validator):
    kb = KnowledgeBase.of(ConceptAssertion("a", ConceptName("R")), RoleAssertion("a", "b", RoleName("R")))
    result = validator.validate_kb(kb)
    assert "NAME_SORT" in codes(result)
    assert result['message'].startswith("1 error(s)")


def test_universal_role_is_not_chained(validator):
    kb = KnowledgeBase.of(RoleChain((RoleName("U"), RoleName("R")), RoleName("S")))
    assert "CHAIN_U" in codes(validator.validate_kb(kb))
