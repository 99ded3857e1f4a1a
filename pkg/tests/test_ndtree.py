import pytest

from minimp.calculus import prove, prove_formula, Sequent
from minimp.formula import imp, imp_count, parse_formula, semi_subformulas, var, var_set
from minimp import ndtree as nd
from util import enumerate_formulas, example13_tree, leaf_depths


def test_embed_identity_shape():
    t = nd.embed(prove_formula(parse_formula("p->p")))
    assert t.rule == nd.INTRO and t.formula is parse_formula("p->p")
    leaf = t.children[0]
    assert leaf.rule == nd.ASSUMPTION and leaf.discharge == t.label
    assert nd.check_tree(t) == []
    assert nd.open_assumptions_tree(t) == frozenset()


def test_embed_open_assumptions_within_antecedent():
    goal = Sequent.make([parse_formula("p->q"), var("p")], var("q"))
    proof = prove(goal)
    t = nd.embed(proof)
    assert nd.check_tree(t) == []
    assert nd.open_assumptions_tree(t) <= set(goal.antecedent)


def test_embed_rejects_bad_proof():
    from minimp.calculus import SCProof
    bad = SCProof(Sequent.make([], parse_formula("p->q")), "MA")
    with pytest.raises(ValueError):
        nd.embed(bad)


def test_check_tree_rejects_bad_elim():
    t = nd.elim(var("q"), nd.assumption(var("p")),
                nd.assumption(parse_formula("q->r")))
    assert nd.check_tree(t)


def test_check_tree_rejects_out_of_scope_discharge():
    # The discharge label exists only in a sibling subtree.
    t = nd.elim(var("q"),
                nd.assumption(var("p"), discharge=7),
                nd.intro(parse_formula("p->q"),
                         nd.assumption(var("q")), label=7))
    assert any("no intro ancestor" in v for v in nd.check_tree(t))


def test_check_tree_rejects_wrong_antecedent_discharge():
    t = nd.intro(parse_formula("p->q"), nd.assumption(var("q"), discharge=3),
                 label=3)
    assert any("different antecedent" in v for v in nd.check_tree(t))


def test_open_assumptions_shadowing():
    a, rho, t = example13_tree()
    assert nd.check_tree(t) == []
    # The left a is open even though the right branch discharges its own a.
    assert nd.open_assumptions_tree(t) == {a, imp(a, rho), imp(rho, a)}


def test_pad_uniform_levels_and_invariants():
    _, _, t = example13_tree()
    p = nd.pad_uniform(t)
    assert nd.check_tree(p) == []
    assert set(leaf_depths(p)) == {nd.tree_height(p)}
    before, after = nd.tree_metrics(t), nd.tree_metrics(p)
    assert (before.height, before.foundation, before.max_arrows) == \
        (after.height, after.foundation, after.max_arrows)
    assert nd.open_assumptions_tree(p) == nd.open_assumptions_tree(t)
    assert nd.pad_uniform(p) == p


def test_pad_single_node():
    t = nd.assumption(var("p"))
    assert nd.pad_uniform(t) == t


def test_metrics_single_node():
    m = nd.tree_metrics(nd.assumption(var("p")))
    assert (m.size, m.height, m.foundation, m.weight) == (1, 0, 1, 1)


def test_embed_bounds_small_corpus():
    memo = {}
    for f in enumerate_formulas(("p", "q"), 4):
        proof = prove_formula(f, memo=memo)
        if proof is None:
            continue
        t = nd.embed(proof)
        assert nd.check_tree(t) == []
        assert nd.open_assumptions_tree(t) == frozenset()
        k = imp_count(f)
        m = nd.tree_metrics(t)
        assert m.height <= 18 * k
        assert m.foundation < (k + 1) ** 2 * (k + 2)
        assert m.max_arrows <= 2 * k
        extended = set(semi_subformulas(f))
        for g in list(extended):
            for q in var_set(f):
                extended.add(imp(g, var(q)))
        assert nd.tree_formulas(t) <= extended
