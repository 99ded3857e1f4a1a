import pytest

from minimp.calculus import (SCProof, SearchBudgetExceeded, Sequent,
                             check_proof, degree, degree_strictly_decreases,
                             proof_formulas, proof_metrics, prove,
                             prove_formula)
from minimp.formula import imp, parse_formula, semi_subformulas, var
from minimp.oracle import minimal_valid
from util import enumerate_formulas


def seq(ants, suc):
    return Sequent.make([parse_formula(a) for a in ants], parse_formula(suc))


def test_degree_examples():
    assert degree(seq([], "p")) == 0
    assert degree(seq(["p->q"], "p")) == 1
    assert degree(seq([], "p->q")) == 1
    # With several matching implications the value is the antecedent sum
    # no matter which one is singled out.
    assert degree(seq(["p->q", "p->(q->q)", "r"], "p")) == 3


def test_prove_identity():
    proof = prove_formula(parse_formula("p->p"))
    assert proof.rule == "MI1"
    assert proof.premises[0].rule == "MA"
    assert check_proof(proof) == []


def test_prove_k_combinator():
    proof = prove_formula(parse_formula("p->q->p"))
    assert [proof.rule, proof.premises[0].rule, proof.premises[0].premises[0].rule] \
        == ["MI1", "MI1", "MA"]


def test_peirce_unprovable():
    assert prove_formula(parse_formula("((p->q)->p)->p")) is None


def test_budget_is_enforced():
    with pytest.raises(SearchBudgetExceeded):
        prove_formula(parse_formula("(p->q)->(q->r)->(p->r)"), budget=2)


def test_mi2_fires_when_mi1_blocked():
    # Antecedent contains (p->q)->r, so the implication goal p->q must go
    # through the branching rule.
    proof = prove(seq(["(p->q)->r"], "p->q"))
    assert proof is not None
    assert proof.rule == "MI2"
    assert check_proof(proof) == []


def test_checker_rejects_bad_axiom():
    bad = SCProof(seq(["p"], "p->q"), "MA", (), parse_formula("p->q"))
    assert any("variable" in v for v in check_proof(bad))


def test_checker_rejects_blocked_mi1():
    inner = prove(seq(["(p->q)->r", "p"], "q"))
    # Force an MI1 node whose context contains the blocker.
    bad = SCProof(seq(["(p->q)->r"], "p->q"), "MI1",
                  (prove(seq(["(p->q)->r", "p"], "q")) or
                   SCProof(seq(["(p->q)->r", "p"], "q"), "MA"),))
    assert any("blocked" in v for v in check_proof(bad))


def test_checker_rejects_wrong_premise():
    good = prove_formula(parse_formula("p->p"))
    bad = SCProof(seq([], "q->q"), "MI1", good.premises)
    assert check_proof(bad)


def test_metrics_identity_proof():
    m = proof_metrics(prove_formula(parse_formula("p->p")))
    assert m.height == 2
    assert m.max_arrows == 1
    assert m.size == 2
    assert m.foundation == 2
    assert m.weight >= m.size


def test_degree_decreases_and_semi_subformulas():
    memo = {}
    for f in enumerate_formulas(("p", "q"), 4):
        proof = prove_formula(f, memo=memo)
        if proof is None:
            continue
        assert degree_strictly_decreases(proof)
        assert proof_formulas(proof) <= semi_subformulas(f)
        assert check_proof(proof) == []


def test_agrees_with_oracle_small():
    memo = {}
    for f in enumerate_formulas(("p", "q"), 3):
        assert (prove_formula(f, memo=memo) is not None) == minimal_valid(f)


def test_proofs_shared_across_memo_stay_checkable():
    memo = {}
    p1 = prove_formula(parse_formula("(p->q)->(p->q)"), memo=memo)
    p2 = prove_formula(parse_formula("(p->q)->p->q"), memo=memo)
    assert check_proof(p1) == [] and check_proof(p2) == []
