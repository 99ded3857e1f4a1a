"""Shared test helpers: independent oracles and small enumerations."""

from __future__ import annotations

import itertools

from minimp.formula import Formula, imp, var
from minimp import ndtree as nd


def enumerate_formulas(names: tuple[str, ...], max_arrows: int) -> list[Formula]:
    """All formulas over exactly this alphabet with at most ``max_arrows`` arrows."""
    by_n: list[list[Formula]] = [[var(v) for v in names]]
    for n in range(1, max_arrows + 1):
        layer = []
        for i in range(n):
            for a in by_n[i]:
                for b in by_n[n - 1 - i]:
                    layer.append(imp(a, b))
        by_n.append(layer)
    return [f for layer in by_n for f in layer]


def ssf_occurrences(f: Formula) -> int:
    """Independent occurrence count for the semi-subformula recursion.

    Counts the subformula occurrences of ``f`` (tree positions) plus the
    closure of virtual occurrences: every occurrence shaped ``(a->b)->c``
    contributes a ``b->c`` node over the existing ``b`` and ``c``
    occurrences, and these virtual nodes chain while their antecedent is
    itself an implication.  Dual route to the arithmetic recursion.
    """
    real: dict[str, Formula] = {}
    stack = [("", f)]
    while stack:
        pos, g = stack.pop()
        real[pos] = g
        if not g.is_var:
            stack.append((pos + "0", g.left))
            stack.append((pos + "1", g.right))
    virtual: set[tuple[str, str]] = set()
    work = [(pos + "01", pos + "1") for pos, g in real.items()
            if not g.is_var and not g.left.is_var]
    while work:
        b, c = work.pop()
        if (b, c) in virtual:
            continue
        virtual.add((b, c))
        if not real[b].is_var:
            work.append((b + "1", c))
    return len(real) + len(virtual)


def semi_subformula_set_oracle(f: Formula) -> frozenset[Formula]:
    """Fixpoint closure from the definition, independent of the recursion."""
    closure = {f}
    while True:
        new = set()
        for g in closure:
            if g.is_var:
                continue
            new.update((g.left, g.right))
            if not g.left.is_var:
                new.add(imp(g.left.right, g.right))
        if new <= closure:
            return frozenset(closure)
        closure |= new


def rename_vars(f: Formula, mapping: dict[str, str]) -> Formula:
    if f.is_var:
        return var(mapping.get(f.name, f.name))
    return imp(rename_vars(f.left, mapping), rename_vars(f.right, mapping))


def example13_tree() -> tuple[Formula, Formula, nd.NDTree]:
    """The diamond example: a deduction of ``rho`` from {a, a->rho, rho->a}.

    Returns (alpha, rho, unpadded tree).  The left branch derives ``a`` from
    ``rho`` and ``rho->a`` via an open ``a``; the right branch reproves
    ``a->rho`` by discharging its own ``a``.
    """
    a, rho = var("a"), var("b")
    ar, ra = imp(a, rho), imp(rho, a)
    left = nd.elim(a, nd.elim(rho, nd.assumption(a), nd.assumption(ar)),
                   nd.assumption(ra))
    right = nd.intro(ar, nd.elim(rho, nd.assumption(a, discharge=1),
                                 nd.assumption(ar)), label=1)
    return a, rho, nd.elim(rho, left, right)


def leaf_depths(t: nd.NDTree) -> list[int]:
    out = []
    stack = [(t, 0)]
    while stack:
        node, d = stack.pop()
        if not node.children:
            out.append(d)
        stack.extend((c, d + 1) for c in node.children)
    return out
