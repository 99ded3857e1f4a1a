import pytest

from minimp.formula import parse_formula
from minimp.oracle import OracleBudgetExceeded, minimal_valid


@pytest.mark.parametrize("text", [
    "p->p",
    "p->q->p",
    "(p->q->r)->(p->q)->p->r",
    "(p->q)->(r->p)->(r->q)",
    "(p->p->q)->(p->q)",
    "((p->q)->q->r)->(q->r)",
])
def test_valid(text):
    assert minimal_valid(parse_formula(text))


@pytest.mark.parametrize("text", [
    "p",
    "p->q",
    "((p->q)->p)->p",       # needs classical reasoning
    "(p->q)->(q->p)",
    "((p->q)->r)->(p->r)",
])
def test_invalid(text):
    assert not minimal_valid(parse_formula(text))


def test_budget_enforced():
    with pytest.raises(OracleBudgetExceeded):
        minimal_valid(parse_formula("(p->q->r)->(p->q)->p->r"), budget=3)


def test_loop_check_contingent_failures_not_poisoning():
    # A formula whose search revisits subgoals under different histories.
    f = parse_formula("((p->q)->q)->((q->p)->p)->(p->q)->q")
    assert minimal_valid(f)
