"""Tree-like natural deduction with discharge annotations.

Nodes carry a formula and one of five rule tags: assumption leaves,
implication introduction (one premise, discharges a label), implication
elimination (minor premise then major premise), repetition (children repeat
the node's formula), and merged multipremise nodes as produced by unfolding
a dag (each child justified as a repetition, an introduction premise, or
half of an elimination pair).

An assumption is *discharged* when some edge below it introduces an
implication whose antecedent is the assumption's formula; the explicit
``label``/``discharge`` annotations are bookkeeping on top of that and are
validated against it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, Optional

from .calculus import SCProof, check_proof
from .formula import Formula, imp, imp_count
from .metrics import MetricsReport

ASSUMPTION = "assumption"
INTRO = "intro"
ELIM = "elim"
REP = "rep"
MULTI = "multi"

# Multipremise group entries: ("one", i) marks child i as a repetition or
# introduction premise, ("two", i, j) as an elimination pair (minor, major).
Group = tuple


@dataclass(frozen=True)
class NDTree:
    formula: Formula
    rule: str
    children: tuple["NDTree", ...] = ()
    label: Optional[int] = None       # intro nodes: discharge label
    discharge: Optional[int] = None   # assumption leaves: discharging label
    groups: Optional[tuple[Group, ...]] = None  # multi nodes only


def assumption(f: Formula, discharge: Optional[int] = None) -> NDTree:
    return NDTree(f, ASSUMPTION, (), None, discharge)


def intro(f: Formula, child: NDTree, label: Optional[int] = None) -> NDTree:
    return NDTree(f, INTRO, (child,), label)


def elim(f: Formula, minor: NDTree, major: NDTree) -> NDTree:
    return NDTree(f, ELIM, (minor, major))


def rep(f: Formula, *children: NDTree) -> NDTree:
    return NDTree(f, REP, tuple(children))


def multi(f: Formula, children: tuple[NDTree, ...], groups: tuple[Group, ...]) -> NDTree:
    return NDTree(f, MULTI, children, groups=groups)


def node_groups(t: NDTree) -> tuple[Group, ...]:
    """The premise grouping of a node, synthesising it for the fixed-arity rules."""
    if t.rule == MULTI:
        return t.groups or ()
    if t.rule == ELIM:
        return (("two", 0, 1),)
    if t.rule in (INTRO, REP):
        return tuple(("one", i) for i in range(len(t.children)))
    return ()


def intro_antecedent(parent: NDTree, child_index: int) -> Optional[Formula]:
    """The formula discharged by stepping from ``parent`` down past this child.

    Non-None exactly when the child is a singleton premise and the parent's
    formula is ``a -> child``; repetitions and elimination premises yield None.
    """
    f, c = parent.formula, parent.children[child_index].formula
    if f.is_var or f.right is not c or f is c:
        return None
    for g in node_groups(parent):
        if g[0] == "one" and g[1] == child_index:
            return f.left
    return None


def iter_nodes(t: NDTree) -> Iterator[NDTree]:
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(node.children)


def check_tree(t: NDTree) -> list[str]:
    """Validate rule-tag invariants and discharge scoping; [] means ok."""
    out: list[str] = []
    # (node, path, scope) where scope maps open intro labels to antecedents.
    stack: list[tuple[NDTree, str, dict[int, Formula]]] = [(t, "root", {})]
    while stack:
        node, path, scope = stack.pop()

        def bad(msg: str, path=path) -> None:
            out.append(f"{path}: {msg}")

        child_scope = scope
        if node.rule == ASSUMPTION:
            if node.children:
                bad("assumption with children")
            if node.discharge is not None:
                want = scope.get(node.discharge)
                if want is None:
                    bad("discharge label refers to no intro ancestor")
                elif want is not node.formula:
                    bad("discharging intro introduces a different antecedent")
        elif node.rule == INTRO:
            if len(node.children) != 1:
                bad("intro needs exactly one premise")
            elif node.formula.is_var or node.formula.right is not node.children[0].formula:
                bad("intro conclusion must be a -> premise")
            if node.label is not None and not node.formula.is_var:
                child_scope = dict(scope)
                child_scope[node.label] = node.formula.left
        elif node.rule == ELIM:
            if len(node.children) != 2:
                bad("elim needs exactly two premises")
            else:
                minor, major = node.children
                if major.formula.is_var or major.formula.left is not minor.formula \
                        or major.formula.right is not node.formula:
                    bad("elim premises must be a and a -> conclusion")
        elif node.rule == REP:
            if not node.children:
                bad("repetition needs at least one premise")
            if any(c.formula is not node.formula for c in node.children):
                bad("repetition premises must repeat the conclusion")
        elif node.rule == MULTI:
            groups = node.groups or ()
            used: set[int] = set()
            for g in groups:
                if g[0] == "one":
                    i = g[1]
                    used.add(i)
                    cf = node.children[i].formula
                    if cf is not node.formula and (
                            node.formula.is_var or node.formula.right is not cf):
                        bad(f"group {g}: child is neither a repetition nor an intro premise")
                elif g[0] == "two":
                    i, j = g[1], g[2]
                    used.update((i, j))
                    minor, major = node.children[i].formula, node.children[j].formula
                    if major.is_var or major.left is not minor or major.right is not node.formula:
                        bad(f"group {g}: children are not an elimination pair")
                else:
                    bad(f"unknown group kind {g[0]!r}")
            if used != set(range(len(node.children))):
                bad("groups do not cover the children exactly")
            if node.label is not None:
                child_scope = dict(scope)
                if not node.formula.is_var:
                    child_scope[node.label] = node.formula.left
        else:
            bad(f"unknown rule {node.rule!r}")

        for i, c in enumerate(node.children):
            stack.append((c, f"{path}.{i}", child_scope))
    return out


def open_assumptions_tree(t: NDTree) -> frozenset[Formula]:
    """Formulas of leaves whose root path crosses no introduction of them."""
    out: set[Formula] = set()
    stack: list[tuple[NDTree, frozenset[Formula]]] = [(t, frozenset())]
    while stack:
        node, closed = stack.pop()
        if node.rule == ASSUMPTION:
            if node.formula not in closed:
                out.add(node.formula)
            continue
        for i, c in enumerate(node.children):
            a = intro_antecedent(node, i)
            stack.append((c, closed | {a} if a is not None else closed))
    return frozenset(out)


def tree_height(t: NDTree) -> int:
    """Edge height: a single node has height 0."""
    best = 0
    stack = [(t, 0)]
    while stack:
        node, d = stack.pop()
        if not node.children and d > best:
            best = d
        stack.extend((c, d + 1) for c in node.children)
    return best


def tree_metrics(t: NDTree) -> MetricsReport:
    size = 0
    weight = 0
    formulas: set[Formula] = set()
    for node in iter_nodes(t):
        size += 1
        weight += len(node.formula.text)
        formulas.add(node.formula)
    return MetricsReport(
        height=tree_height(t),
        foundation=len(formulas),
        max_arrows=max(imp_count(f) for f in formulas),
        size=size,
        weight=weight,
    )


def tree_formulas(t: NDTree) -> frozenset[Formula]:
    return frozenset(node.formula for node in iter_nodes(t))


def _rebuild(t: NDTree, leaf_fn: Callable[[NDTree], NDTree]) -> NDTree:
    """Rebuild a tree bottom-up, mapping each leaf through ``leaf_fn``."""
    stack = [[t, 0, []]]  # node, next child index, rebuilt children
    while True:
        node, i, built = stack[-1]
        if i < len(node.children):
            stack[-1][1] += 1
            stack.append([node.children[i], 0, []])
            continue
        stack.pop()
        new = replace(node, children=tuple(built)) if node.children else leaf_fn(node)
        if not stack:
            return new
        stack[-1][2].append(new)


def replace_open_leaves(t: NDTree, target: Formula,
                        make: Callable[[], NDTree]) -> NDTree:
    """Replace every undischarged assumption leaf labelled ``target``."""
    def fn(leaf: NDTree) -> NDTree:
        if leaf.rule == ASSUMPTION and leaf.formula is target and leaf.discharge is None:
            return make()
        return leaf
    return _rebuild(t, fn)


def discharge_open_leaves(t: NDTree, target: Formula, label: int) -> NDTree:
    """Mark every undischarged assumption leaf labelled ``target`` as discharged."""
    def fn(leaf: NDTree) -> NDTree:
        if leaf.rule == ASSUMPTION and leaf.formula is target and leaf.discharge is None:
            return replace(leaf, discharge=label)
        return leaf
    return _rebuild(t, fn)


def pad_uniform(t: NDTree) -> NDTree:
    """Lift every leaf to the tree's height by inserting repetition chains.

    Idempotent; preserves height, foundation, maximal formula size and the
    open-assumption set.
    """
    h = tree_height(t)
    stack = [[t, 0, []]]
    while True:
        node, i, built = stack[-1]
        if i < len(node.children):
            stack[-1][1] += 1
            stack.append([node.children[i], 0, []])
            continue
        stack.pop()
        if node.children:
            new = replace(node, children=tuple(built))
        else:
            new = node
            for _ in range(h - len(stack)):
                new = rep(node.formula, new)
        if not stack:
            return new
        stack[-1][2].append(new)


class _Labels:
    def __init__(self):
        self._counter = itertools.count(1)

    def fresh(self) -> int:
        return next(self._counter)


def _major_gadget(a: Formula, b: Formula, c: Formula, labels: _Labels) -> NDTree:
    """Derive ``b->c`` from the open assumption ``(a->b)->c``.

    The premise ``b`` is assumed, vacuously wrapped into ``a->b``, eliminated
    against the open major assumption, and the result reintroduced as ``b->c``
    discharging the assumed ``b``.
    """
    lb = labels.fresh()
    beta_leaf = assumption(b, discharge=lb)
    ab = intro(imp(a, b), beta_leaf, label=labels.fresh())
    major = assumption(imp(imp(a, b), c))
    gamma = elim(c, ab, major)
    return intro(imp(b, c), gamma, label=lb)


def embed(proof: SCProof, checked: bool = False) -> NDTree:
    """Translate a sequent proof into a tree-like natural deduction.

    The result concludes the succedent of the proof's end sequent and its
    open assumptions all occur in the antecedent.  Each rule is realised by
    a fixed local gadget, so the height grows by at most six per inference.
    """
    if not checked:
        problems = check_proof(proof)
        if problems:
            raise ValueError(f"refusing to embed an ill-formed proof: {problems[0]}")
    labels = _Labels()
    return _embed(proof, labels)


def _embed(node: SCProof, labels: _Labels) -> NDTree:
    seq = node.conclusion
    if node.rule == "MA":
        return assumption(seq.succedent)

    if node.rule == "MI1":
        a, b = seq.succedent.left, seq.succedent.right
        d = _embed(node.premises[0], labels)
        lab = labels.fresh()
        d = discharge_open_leaves(d, a, lab)
        return intro(seq.succedent, d, label=lab)

    if node.rule == "MI2":
        a, b = seq.succedent.left, seq.succedent.right
        c = node.principal.right
        d = _embed(node.premises[0], labels)
        d = replace_open_leaves(d, imp(b, c), lambda: _major_gadget(a, b, c, labels))
        lab = labels.fresh()
        d = discharge_open_leaves(d, a, lab)
        return intro(seq.succedent, d, label=lab)

    if node.rule == "MEP":
        p, c = node.principal.left, node.principal.right
        d = _embed(node.premises[0], labels)
        return replace_open_leaves(
            d, c, lambda: elim(c, assumption(p), assumption(node.principal)))

    if node.rule == "MEE":
        a, b = node.principal.left.left, node.principal.left.right
        c = node.principal.right
        q = seq.succedent
        d1 = _embed(node.premises[0], labels)
        d1 = replace_open_leaves(d1, imp(b, c), lambda: _major_gadget(a, b, c, labels))
        lab = labels.fresh()
        d1 = discharge_open_leaves(d1, a, lab)
        ab = intro(imp(a, b), d1, label=lab)
        gamma = elim(c, ab, assumption(node.principal))
        d2 = _embed(node.premises[1], labels)
        l3 = labels.fresh()
        d2 = discharge_open_leaves(d2, c, l3)
        cq = intro(imp(c, q), d2, label=l3)
        return elim(q, gamma, cq)

    raise ValueError(f"unknown rule {node.rule!r}")
