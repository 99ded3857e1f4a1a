import pytest
from hypothesis import given, settings, strategies as st

from minimp.formula import (Formula, ParseError, imp, imp_chain, imp_count,
                            parse_formula, render, semi_subformulas,
                            ssf_count, subformulas, var, var_set)
from util import (enumerate_formulas, rename_vars, semi_subformula_set_oracle,
                  ssf_occurrences)


def test_parse_right_associative():
    f = parse_formula("p->q->r")
    assert f == imp(var("p"), imp(var("q"), var("r")))
    assert f.left is var("p")


def test_parse_grouping():
    assert parse_formula("(p->q)->r") == imp(imp(var("p"), var("q")), var("r"))
    assert parse_formula("p") is var("p")
    assert parse_formula(" ( p -> q ) ") == imp(var("p"), var("q"))


@pytest.mark.parametrize("text,pos", [
    ("", 0),
    ("p->", 3),
    ("(p->q", 5),
    ("p->)q", 3),
    ("p q", 2),
])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as exc:
        parse_formula(text)
    assert exc.value.position == pos


def test_interning_makes_equality_identity():
    assert parse_formula("p->q") is parse_formula("p -> q")
    assert imp(var("p"), var("q")) is parse_formula("p->q")


def test_imp_count():
    assert imp_count(var("p")) == 0
    assert imp_count(parse_formula("p->q")) == 1
    assert imp_count(parse_formula("(p->q)->(r->s)")) == 3


def test_var_set():
    assert var_set(parse_formula("p->q")) == {"p", "q"}
    assert var_set([]) == frozenset()
    assert var_set([var("p"), parse_formula("(q->r)->p")]) == {"p", "q", "r"}


def test_imp_chain():
    assert imp_chain(var("p"), var("q"), var("r")) is parse_formula("p->q->r")


@st.composite
def formulas(draw, max_depth=6):
    if max_depth == 0 or draw(st.booleans()):
        return var(draw(st.sampled_from("pqrs")))
    return imp(draw(formulas(max_depth=max_depth - 1)),
               draw(formulas(max_depth=max_depth - 1)))


@given(formulas())
@settings(max_examples=200, deadline=None)
def test_parse_render_roundtrip(f):
    assert parse_formula(render(f)) is f


def test_semi_subformulas_examples():
    p, q, r = var("p"), var("q"), var("r")
    assert semi_subformulas(p) == {p}
    assert semi_subformulas(imp(p, q)) == {imp(p, q), p, q}
    f = imp(imp(p, q), r)
    assert semi_subformulas(f) == {f, imp(p, q), p, q, r, imp(q, r)}


def test_semi_subformulas_contains_subformulas():
    for f in enumerate_formulas(("p", "q"), 4):
        assert subformulas(f) <= semi_subformulas(f)


def test_semi_subformulas_matches_fixpoint_oracle():
    for f in enumerate_formulas(("p", "q", "r"), 4):
        assert semi_subformulas(f) == semi_subformula_set_oracle(f)


def test_ssf_base_cases():
    assert ssf_count(var("p")) == 1
    assert ssf_count(parse_formula("p->q")) == 3
    assert ssf_count(parse_formula("(p->q)->r")) == 6


def test_ssf_counts_occurrences_not_distinct_formulas():
    # Repeated subformulas keep their own occurrences.
    f = parse_formula("p->p")
    assert ssf_count(f) == 3
    assert len(semi_subformulas(f)) == 2
    g = parse_formula("p->q->p")
    assert ssf_count(g) == 5
    assert len(semi_subformulas(g)) == 4


def test_ssf_equals_occurrence_closure_small():
    for f in enumerate_formulas(("p", "q", "r"), 4):
        assert ssf_count(f) == ssf_occurrences(f)


def test_ssf_is_shape_invariant():
    f = parse_formula("(p->(q->p))->(r->q)")
    g = rename_vars(f, {"p": "x", "q": "x", "r": "x"})
    assert ssf_count(f) == ssf_count(g)
    assert ssf_occurrences(f) == ssf_occurrences(g)


def test_ssf_quadratic_bound_small():
    for f in enumerate_formulas(("p", "q"), 5):
        assert ssf_count(f) <= (imp_count(f) + 1) ** 2
        assert len(semi_subformulas(f)) <= ssf_count(f)
