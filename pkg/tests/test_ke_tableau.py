import pytest

from error_logger import ReasonerError, ResourceBoundError
from ke_tableau import (
    Branch,
    VariableOrder,
    apply_E,
    apply_PB,
    branch_model,
    normalize,
    saturate_literals,
)
from resource_guard import BranchBudget
from setcalc import Clause, Eq, Mem1, Mem3, VarKind, evaluate, neg, pos, var0, var1, var3

A = var0(VarKind.INDIVIDUAL, "x_a")
B = var0(VarKind.INDIVIDUAL, "x_b")
C_ = var0(VarKind.INDIVIDUAL, "x_c")
W = var0(VarKind.WITNESS, "w_I")
C = var1(VarKind.CONCEPT, "C")
D = var1(VarKind.CONCEPT, "D")
E = var1(VarKind.CONCEPT, "E")
F = var1(VarKind.CONCEPT, "F")
R = var3(VarKind.ROLE, "R")


def test_complementary_literals_close_the_root():
    tableau = saturate_literals([pos(Mem1(A, C)), neg(Mem1(A, C))], [])
    assert tableau.closed
    assert tableau.leaves == 1


def test_reflexive_disequality_closes():
    tableau = saturate_literals([neg(Eq(A, A))], [])
    assert tableau.closed


def test_disjunction_gives_two_open_branches():
    tableau = saturate_literals([], [Clause.of(pos(Mem1(A, C)), pos(Mem1(A, D)))])
    assert tableau.leaves == 2
    assert len(tableau.open_branches()) == 2
    left, right = tableau.branches
    # PB puts the complement on the left, the E-rule then fulfils the clause
    assert neg(Mem1(A, C)) in left and pos(Mem1(A, D)) in left
    assert pos(Mem1(A, C)) in right
    assert [b.id for b in tableau.branches] == ["0.0", "0.1"]


def test_e_rule_fires_without_branching():
    tableau = saturate_literals([neg(Mem1(A, C))], [Clause.of(pos(Mem1(A, C)), pos(Mem1(A, D)))])
    assert tableau.leaves == 1
    assert pos(Mem1(A, D)) in tableau.branches[0]
    assert tableau.trace[0].startswith("E 2")


def test_e_rule_with_every_complement_present_closes():
    ground = [neg(Mem1(A, C)), neg(Mem1(A, D))]
    tableau = saturate_literals(ground, [Clause.of(pos(Mem1(A, C)), pos(Mem1(A, D)))])
    assert tableau.closed


def test_every_open_branch_fulfils_every_clause():
    clauses = [Clause.of(pos(Mem1(A, C)), pos(Mem1(A, D))),
               Clause.of(neg(Mem1(A, C)), pos(Mem1(A, E))),
               Clause.of(neg(Mem1(A, D)), neg(Mem1(A, E)))]
    tableau = saturate_literals([], clauses)
    assert tableau.open_branches()
    for branch in tableau.open_branches():
        assert all(branch.fulfils(c) for c in clauses)


def test_apply_e_checks_its_premises():
    clause = Clause.of(pos(Mem1(A, C)), pos(Mem1(A, D)))
    with pytest.raises(ReasonerError):
        apply_E(Branch("0"), clause, 1)


def test_apply_pb_forks():
    branch = Branch("0")
    branch.add(pos(Mem1(A, E)))
    left, right = apply_PB(branch, pos(Mem1(A, C)))
    assert (left.id, right.id) == ("0.0", "0.1")
    assert neg(Mem1(A, C)) in left and pos(Mem1(A, C)) in right
    assert pos(Mem1(A, E)) in left and pos(Mem1(A, E)) in right


def test_branch_budget_is_enforced():
    clauses = [Clause.of(pos(Mem1(A, C)), pos(Mem1(A, D))),
               Clause.of(pos(Mem1(B, C)), pos(Mem1(B, D)))]
    with pytest.raises(ResourceBoundError):
        saturate_literals([], clauses, BranchBudget(2))


def test_equality_chain_collapses_to_least_variable():
    ground = [pos(Eq(A, B)), pos(Eq(B, C_)), pos(Mem1(C_, C))]
    tableau = normalize(saturate_literals(ground, []))
    (branch,) = tableau.open_branches()
    assert branch.sigma == {B: A, C_: A}
    assert pos(Mem1(A, C)) in branch
    assert branch.complete


def test_normalization_can_close_a_branch():
    ground = [pos(Eq(A, B)), pos(Mem1(A, C)), neg(Mem1(B, C))]
    tableau = normalize(saturate_literals(ground, []))
    assert tableau.closed


def test_order_prefers_individuals_over_witnesses():
    tableau = normalize(saturate_literals([pos(Eq(A, W)), pos(Mem1(W, C))], []))
    (branch,) = tableau.open_branches()
    assert branch.sigma == {W: A}


def test_ranked_names_come_first():
    order = VariableOrder(["x_b"])
    assert order.least(A, B) == B
    assert VariableOrder().least(A, B) == A


def test_order_file(tmp_path):
    path = tmp_path / "order.txt"
    path.write_text("# preferred representatives\nx_c\n\nx_b\n", encoding="utf-8")
    order = VariableOrder.from_file(path)
    assert order.least(B, C_) == C_
    assert order.least(A, B) == B


def test_branch_model_satisfies_the_branch():
    clauses = [Clause.of(pos(Mem1(A, C)), pos(Mem1(B, C)))]
    tableau = normalize(saturate_literals([pos(Eq(A, B)), pos(Mem1(A, D))], clauses))
    for branch in tableau.open_branches():
        m = branch_model(branch)
        assert all(evaluate(m, l.rename(branch.sigma)) for l in branch.literals)
        assert m.value(B) == m.value(A)


def test_e_rule_runs_before_any_split():
    clauses = [Clause.of(pos(Mem1(A, C)), pos(Mem1(A, D))),
               Clause.of(neg(Mem1(A, E)), pos(Mem1(A, F)))]
    tableau = saturate_literals([pos(Mem1(A, E))], clauses)
    assert tableau.trace[0].startswith("E 2")
    assert tableau.trace[1].startswith("PB")
    assert all(pos(Mem1(A, F)) in b for b in tableau.branches)


def test_first_open_stops_at_one_leaf():
    clauses = [Clause.of(pos(Mem1(A, C)), pos(Mem1(A, D))),
               Clause.of(pos(Mem1(B, C)), pos(Mem1(B, D)))]
    full = saturate_literals([], clauses)
    first = saturate_literals([], clauses, first_open=True)
    assert full.leaves == 4 and full.exhaustive
    assert first.leaves == 1 and not first.exhaustive
    assert not first.closed


def test_first_open_on_a_closed_tableau_explores_everything():
    clauses = [Clause.of(pos(Mem1(A, C)), pos(Mem1(A, D)))]
    tableau = saturate_literals([neg(Mem1(A, C)), neg(Mem1(A, D))], clauses, first_open=True)
    assert tableau.closed


def test_pb_fires_at_most_length_minus_one_times_per_clause():
    transitive = [Clause.of(neg(Mem3(x, y, R)), neg(Mem3(y, z, R)), pos(Mem3(x, z, R)))
                  for x in (A, B) for y in (A, B) for z in (A, B)]
    tableau = saturate_literals([pos(Mem3(A, B, R))], transitive)
    assert tableau.open_branches()
    assert tableau.pb_overruns() == {}
    assert tableau.max_pb_per_clause() <= 2


def test_pools_group_variables_by_level():
    tableau = saturate_literals([pos(Mem3(A, B, R))], [Clause.of(pos(Mem1(A, C)), pos(Mem1(B, D)))])
    pools = tableau.pools()
    assert pools[0] == (A, B)
    assert pools[1] == (C, D)
    assert pools[3] == (R,)
