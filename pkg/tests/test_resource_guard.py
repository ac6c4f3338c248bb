import pytest

from error_logger import ResourceBoundError
from resource_guard import BranchBudget, ComplexityReport, check_bound


def test_check_bound():
    assert check_bound("atoms", 3, 3) == 3
    with pytest.raises(ResourceBoundError) as err:
        check_bound("atoms", 4, 3)
    assert err.value.context == {"resource": "atoms", "limit": 3, "observed": 4}
    assert err.value.exit_code == 3


def test_branch_budget():
    budget = BranchBudget(3)
    budget.charge()
    budget.charge(2)
    assert budget.remaining() == 0
    with pytest.raises(ResourceBoundError):
        budget.charge()


def test_bounds():
    report = ComplexityReport(m=2, k=3, r=2, ell=3, disjunctions=18, leaves=4, decision_nodes=7, s=2, h=2)
    assert report.disjunction_bound == 18
    assert report.branch_bound_log2 == 54
    assert report.decision_node_bound == 7
    assert report.violations() == {}


def test_violations_are_reported():
    report = ComplexityReport(m=1, k=2, r=1, ell=1, disjunctions=3, leaves=9, decision_nodes=5, s=1, h=1)
    assert set(report.violations()) == {"disjunctions", "leaves", "decision_nodes"}
