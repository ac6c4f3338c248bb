import pytest

from error_logger import InputError, ResourceBoundError
from frontend import parse_kb
from kb_model import ConcreteRoleAssertion, ConcreteRoleName, Constant, KnowledgeBase
from pipeline import ReasoningPipeline
from settings import ReasonerSettings


def test_consistent_kb(pipeline):
    report = pipeline.consistency(parse_kb("a : C; (a, b) : R;"))
    assert report.consistent
    assert report.open_branches >= 1
    assert report.message.startswith("consistent")


def test_contradictory_kb(pipeline):
    report = pipeline.consistency(parse_kb("a : C; a : ~C;"))
    assert not report.consistent
    assert report.open_branches == 0
    assert "closed tableau" in report.message


@pytest.mark.parametrize("text", [
    "a : Nothing;",
    "a != a;",
    "Irref(R); (a, a) : R;",
    "a = b; a : C; b : ~C;",
    "Fun(R); (a, b) : R; (a, c) : R; b != c;",
    "C <= forall R . D; a : C; (a, b) : R; b : ~D;",
])
def test_inconsistent_kbs(pipeline, text):
    assert not pipeline.consistency(parse_kb(text)).consistent


@pytest.mark.parametrize("text", [
    "a : C | D; a : ~C;",
    "Sym(R); (a, b) : R;",
    "a != b; a : C; b : ~C;",
])
def test_consistent_kbs(pipeline, text):
    assert pipeline.consistency(parse_kb(text)).consistent


def test_tableau_and_oracle_agree(pipeline):
    for text in ("a : C;", "a : C; a : ~C;", "a = b; a : C; b : ~C;"):
        kb = parse_kb(text)
        assert pipeline.consistency(kb).consistent == pipeline.oracle_consistency(kb).sat


def test_complexity_report(pipeline):
    report = pipeline.consistency(parse_kb("a : C;")).complexity
    assert report.k == 3  # a plus the two universe witnesses
    assert report.disjunctions <= report.disjunction_bound
    assert set(report.stage_seconds) >= {"validate", "flatten", "translate", "expand", "saturate", "normalize"}


def test_prepare_is_cached(pipeline):
    kb = parse_kb("a : C;")
    assert pipeline.prepare(kb) is pipeline.prepare(kb)


def test_invalid_kb_is_rejected(pipeline):
    kb = KnowledgeBase.of(ConcreteRoleAssertion("a", Constant("1", "num"), ConcreteRoleName("P")))
    with pytest.raises(InputError) as info:
        pipeline.consistency(kb)
    assert "UNDECLARED_DATATYPE" in info.value.context["codes"]


def test_branch_budget():
    pipeline = ReasoningPipeline(ReasonerSettings(max_branches=1))
    with pytest.raises(ResourceBoundError):
        pipeline.consistency(parse_kb("a : C | D;"))


def test_ranked_order_file(tmp_path):
    path = tmp_path / "order.txt"
    path.write_text("x_b\n", encoding="utf-8")
    pipeline = ReasoningPipeline(ReasonerSettings(order=str(path)))
    prepared = pipeline.prepare(parse_kb("a = b;"))
    assert prepared.tableau.open_branches()
    for branch in prepared.tableau.open_branches():
        assert {v.name: t.name for v, t in branch.sigma.items()} == {"x_a": "x_b"}
