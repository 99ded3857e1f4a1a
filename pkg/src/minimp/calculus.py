"""Sequent calculus for minimal implicational logic, with backward search.

Sequents have a multiset antecedent and a single succedent.  One axiom and
four rules operate on them:

    MA:   G, p => p                                    (p a variable)
    MI1:  G, a => b        / G => a->b                 [no (a->b)->c in G]
    MI2:  G, a, b->c => b  / G, (a->b)->c => a->b
    MEP:  G, p, c => q     / G, p, p->c => q           [q in VAR(G,c), p != q]
    MEE:  G, a, b->c => b   and   G, c => q
                           / G, (a->b)->c => q         [q in VAR(G,c)]

Every backward rule application strictly decreases a degree measure, so
exhaustive depth-first search with memoisation decides provability.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .formula import Formula, imp, imp_count, render, var_set
from .metrics import MetricsReport

RULES = ("MA", "MI1", "MI2", "MEP", "MEE")


def _sorted_multiset(fs: Iterable[Formula]) -> tuple[Formula, ...]:
    return tuple(sorted(fs, key=lambda f: f.text))


@dataclass(frozen=True)
class Sequent:
    """A sequent; the antecedent is kept sorted so equal multisets compare equal."""

    antecedent: tuple[Formula, ...]
    succedent: Formula

    @staticmethod
    def make(antecedent: Iterable[Formula], succedent: Formula) -> "Sequent":
        return Sequent(_sorted_multiset(antecedent), succedent)

    def without(self, *fs: Formula) -> tuple[Formula, ...]:
        """Antecedent minus one occurrence of each given formula."""
        rest = list(self.antecedent)
        for f in fs:
            rest.remove(f)
        return tuple(rest)

    def __str__(self) -> str:
        return ", ".join(f.text for f in self.antecedent) + " => " + self.succedent.text


@dataclass(frozen=True)
class SCProof:
    """A derivation node: conclusion, rule tag, premise subproofs.

    ``principal`` records the rule's active antecedent formula: the axiom
    variable for MA, ``(a->b)->c`` for MI2/MEE, ``p->c`` for MEP; MI1 is
    succedent-driven and stores none.
    """

    conclusion: Sequent
    rule: str
    premises: tuple["SCProof", ...] = ()
    principal: Optional[Formula] = None


class SearchBudgetExceeded(RuntimeError):
    """Backward search visited more sequents than the given budget allows."""


def degree(seq: Sequent) -> int:
    """Degree measure that every backward rule application strictly lowers.

    Sum of arrow counts over the antecedent; the succedent's arrows are
    added only when no antecedent member has the succedent as its own
    antecedent.  (When several such members exist the value does not depend
    on which one is singled out, so the maximising reading is used.)
    """
    base = sum(f.arrows for f in seq.antecedent)
    if any(not f.is_var and f.left is seq.succedent for f in seq.antecedent):
        return base
    return base + seq.succedent.arrows


@dataclass
class _Search:
    budget: int
    visited: int = 0
    memo: dict[Sequent, Optional[SCProof]] = field(default_factory=dict)


def _search(seq: Sequent, st: _Search) -> Optional[SCProof]:
    hit = st.memo.get(seq, _MISS)
    if hit is not _MISS:
        return hit
    st.visited += 1
    if st.visited > st.budget:
        raise SearchBudgetExceeded(f"search budget {st.budget} exhausted")
    proof = _expand(seq, st)
    st.memo[seq] = proof
    return proof


_MISS = object()


def _expand(seq: Sequent, st: _Search) -> Optional[SCProof]:
    ant, suc = seq.antecedent, seq.succedent
    if suc.is_var:
        if suc in ant:
            return SCProof(seq, "MA", (), suc)
        q = suc
        # MEP over each pair (p, p->c) of antecedent occurrences.
        seen: set[tuple[int, int]] = set()
        for f in ant:
            if f.is_var or not f.left.is_var or f.left not in ant:
                continue
            if (id(f.left), id(f)) in seen:
                continue
            seen.add((id(f.left), id(f)))
            p, c = f.left, f.right
            if p is q:
                continue
            rest = seq.without(p, f)
            if q.name not in var_set(rest) | var_set(c):
                continue
            sub = _search(Sequent.make(rest + (p, c), q), st)
            if sub is not None:
                return SCProof(seq, "MEP", (sub,), f)
        # MEE over each antecedent occurrence of shape (a->b)->c.
        seen_mee: set[int] = set()
        for f in ant:
            if f.is_var or f.left.is_var or id(f) in seen_mee:
                continue
            seen_mee.add(id(f))
            a, b, c = f.left.left, f.left.right, f.right
            rest = seq.without(f)
            if q.name not in var_set(rest) | var_set(c):
                continue
            first = _search(Sequent.make(rest + (a, imp(b, c)), b), st)
            if first is None:
                continue
            second = _search(Sequent.make(rest + (c,), q), st)
            if second is not None:
                return SCProof(seq, "MEE", (first, second), f)
        return None
    # Implication succedent: exactly one of MI1 / MI2 applies.
    a, b = suc.left, suc.right
    blockers = [f for f in ant if not f.is_var and f.left is suc]
    if not blockers:
        sub = _search(Sequent.make(ant + (a,), b), st)
        if sub is None:
            return None
        return SCProof(seq, "MI1", (sub,))
    seen_mi2: set[int] = set()
    for f in blockers:
        if id(f) in seen_mi2:
            continue
        seen_mi2.add(id(f))
        c = f.right
        rest = seq.without(f)
        sub = _search(Sequent.make(rest + (a, imp(b, c)), b), st)
        if sub is not None:
            return SCProof(seq, "MI2", (sub,), f)
    return None


def prove(goal: Sequent, budget: int = 1_000_000,
          memo: Optional[dict] = None) -> Optional[SCProof]:
    """Exhaustive backward search; returns a proof or None (unprovable).

    Raises :class:`SearchBudgetExceeded` when more than ``budget`` distinct
    sequents get expanded.  A caller-supplied ``memo`` dict is reused across
    calls, which speeds up corpus runs considerably.
    """
    st = _Search(budget=budget)
    if memo is not None:
        st.memo = memo
    return _search(goal, st)


def prove_formula(rho: Formula, budget: int = 1_000_000,
                  memo: Optional[dict] = None) -> Optional[SCProof]:
    """Prove the sequent ``=> rho`` (identified with the formula itself)."""
    return prove(Sequent.make((), rho), budget, memo)


def _check_node(node: SCProof, path: str, out: list[str]) -> None:
    seq = node.conclusion
    ant, suc = seq.antecedent, seq.succedent
    rule = node.rule

    def bad(msg: str) -> None:
        out.append(f"{path}: {rule}: {msg}")

    if rule == "MA":
        if node.premises:
            bad("axiom with premises")
        if not suc.is_var:
            bad("succedent must be a variable present in the antecedent")
        elif suc not in ant:
            bad("axiom variable missing from antecedent")
        return

    if rule == "MI1":
        if len(node.premises) != 1:
            bad("needs exactly one premise")
            return
        if suc.is_var:
            bad("succedent must be an implication")
            return
        if any(not f.is_var and f.left is suc for f in ant):
            bad("blocked: antecedent contains an implication whose antecedent is the succedent")
        want = Sequent.make(ant + (suc.left,), suc.right)
        if node.premises[0].conclusion != want:
            bad(f"premise is {node.premises[0].conclusion}, expected {want}")
        return

    if rule == "MI2":
        if len(node.premises) != 1:
            bad("needs exactly one premise")
            return
        f = node.principal
        if suc.is_var or f is None or f.is_var or f.left is not suc:
            bad("principal must be (a->b)->c with succedent a->b")
            return
        if f not in ant:
            bad("principal missing from antecedent")
            return
        a, b, c = suc.left, suc.right, f.right
        want = Sequent.make(seq.without(f) + (a, imp(b, c)), b)
        if node.premises[0].conclusion != want:
            bad(f"premise is {node.premises[0].conclusion}, expected {want}")
        return

    if rule == "MEP":
        if len(node.premises) != 1:
            bad("needs exactly one premise")
            return
        f = node.principal
        if f is None or f.is_var or not f.left.is_var:
            bad("principal must be p->c with p a variable")
            return
        p, c = f.left, f.right
        if not suc.is_var:
            bad("succedent must be a variable")
            return
        if p is suc:
            bad("side condition p != q violated")
        if f not in ant or p not in ant:
            bad("antecedent must contain both p and p->c")
            return
        rest = seq.without(p, f)
        if suc.name not in var_set(rest) | var_set(c):
            bad("side condition q in VAR(G,c) violated")
        want = Sequent.make(rest + (p, c), suc)
        if node.premises[0].conclusion != want:
            bad(f"premise is {node.premises[0].conclusion}, expected {want}")
        return

    if rule == "MEE":
        if len(node.premises) != 2:
            bad("needs exactly two premises")
            return
        f = node.principal
        if f is None or f.is_var or f.left.is_var:
            bad("principal must be (a->b)->c")
            return
        if not suc.is_var:
            bad("succedent must be a variable")
            return
        if f not in ant:
            bad("principal missing from antecedent")
            return
        a, b, c = f.left.left, f.left.right, f.right
        rest = seq.without(f)
        if suc.name not in var_set(rest) | var_set(c):
            bad("side condition q in VAR(G,c) violated")
        want1 = Sequent.make(rest + (a, imp(b, c)), b)
        want2 = Sequent.make(rest + (c,), suc)
        if node.premises[0].conclusion != want1:
            bad(f"first premise is {node.premises[0].conclusion}, expected {want1}")
        if node.premises[1].conclusion != want2:
            bad(f"second premise is {node.premises[1].conclusion}, expected {want2}")
        return

    bad("unknown rule")


def check_proof(proof: SCProof) -> list[str]:
    """Validate every node against its rule schema; [] means ok.

    Subproofs may be shared in memory (the prover memoises); each distinct
    node is checked once.
    """
    out: list[str] = []
    seen: set[int] = set()
    stack: list[tuple[SCProof, str]] = [(proof, "root")]
    while stack:
        node, path = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        _check_node(node, path, out)
        for i, prem in enumerate(node.premises):
            stack.append((prem, f"{path}.{i}"))
    return out


def degree_strictly_decreases(proof: SCProof) -> bool:
    """True iff every premise has strictly smaller degree than its conclusion."""
    stack = [proof]
    seen: set[int] = set()
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        d = degree(node.conclusion)
        for prem in node.premises:
            if degree(prem.conclusion) >= d:
                return False
            stack.append(prem)
    return True


def proof_formulas(proof: SCProof) -> frozenset[Formula]:
    """Distinct formulas occurring in any sequent of the proof."""
    out: set[Formula] = set()
    seen: set[int] = set()
    stack = [proof]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        out.update(node.conclusion.antecedent)
        out.add(node.conclusion.succedent)
        stack.extend(node.premises)
    return frozenset(out)


def proof_metrics(proof: SCProof) -> MetricsReport:
    """Height (sequents on the longest branch), foundation, arrows, size, weight.

    Size and weight count tree nodes, i.e. shared subproofs count once per
    occurrence; both are computed without expanding the sharing.
    """
    heights: dict[int, int] = {}
    sizes: dict[int, int] = {}
    weights: dict[int, int] = {}

    def seq_weight(seq: Sequent) -> int:
        return sum(len(f.text) for f in seq.antecedent) + len(seq.succedent.text)

    order: list[SCProof] = []
    seen: set[int] = set()
    stack = [proof]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        order.append(node)
        stack.extend(node.premises)
    for node in reversed(order):
        hs = [heights[id(p)] for p in node.premises]
        heights[id(node)] = 1 + (max(hs) if hs else 0)
        sizes[id(node)] = 1 + sum(sizes[id(p)] for p in node.premises)
        weights[id(node)] = seq_weight(node.conclusion) + sum(
            weights[id(p)] for p in node.premises)

    formulas = proof_formulas(proof)
    return MetricsReport(
        height=heights[id(proof)],
        foundation=len(formulas),
        max_arrows=max(imp_count(f) for f in formulas),
        size=sizes[id(proof)],
        weight=weights[id(proof)],
    )
