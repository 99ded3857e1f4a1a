"""Horizontal compression: merge same-formula vertices level by level.

Collapsing a level merges every set of its vertices that share a formula
into one representative, rewires edges through the merge, and rewrites the
road signs so that descending threads keep tracing the original tree paths.
Compression runs the collapse bottom-up over all levels; the result has at
most one vertex per (level, formula) pair, hence at most height x
foundation vertices in total.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .formula import Formula
from . import ndtree as nd
from .dag import DagDeduction, Edge, Entry, StructureError, from_tree, make_dag, propagate_signs


@dataclass
class CollapseTrace:
    """Audit record of one same-formula merge at one level."""

    level: int
    formula: str
    merged: list[int]
    representative: int
    sign_cases: dict[Edge, str] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "formula": self.formula,
            "merged": self.merged,
            "representative": self.representative,
            "sign_cases": {f"{u}->{v}": c for (u, v), c in sorted(self.sign_cases.items())},
        }


def disjoint_above(d: DagDeduction, n: int) -> bool:
    """True when the subgraphs above level ``n`` are pairwise disjoint trees."""
    return all(len(d.pars[u]) == 1 for u in d.vertices
               if d.level[u] > n and u != d.root)


def collapse_same_formula(d: DagDeduction, n: int, alpha: Formula,
                          rep: Optional[int] = None,
                          ) -> tuple[DagDeduction, CollapseTrace]:
    """Merge all level-``n`` vertices labelled ``alpha`` into one.

    Requires the subgraphs above level ``n`` to be disjoint trees.  The
    representative defaults to the smallest vertex id.  Identity when the
    formula occurs at most once on the level.
    """
    if not disjoint_above(d, n):
        raise StructureError(f"level {n} does not root disjoint subtrees")
    squad = [u for u in d.level_vertices(n) if d.label[u] is alpha]
    if rep is None:
        rep = min(squad) if squad else -1
    elif rep not in squad:
        raise StructureError(f"representative {rep} is not a level-{n} vertex "
                             f"labelled {alpha.text}")
    trace = CollapseTrace(n, alpha.text, sorted(squad), rep)
    if len(squad) < 2:
        return d, trace
    squad_set = set(squad)
    dropped = squad_set - {rep}

    def mapped(x: int) -> int:
        return rep if x in squad_set else x

    level = {u: h for u, h in d.level.items() if u not in dropped}
    label = {u: f for u, f in d.label.items() if u not in dropped}
    edges = {(mapped(u), mapped(v)) for (u, v) in d.edges()}

    old_parents = sorted({p for y in squad for p in d.pars[y]})
    groups: dict[int, tuple[Entry, ...]] = {}
    for u in level:
        if u == rep:
            entries: list[Entry] = []
            for y in squad:
                for g in d.groups.get(y, ()):
                    if g not in entries:
                        entries.append(g)
            groups[u] = tuple(entries)
        elif u in old_parents:
            entries = []
            for g in d.groups.get(u, ()):
                ng = mapped(g) if isinstance(g, int) else (mapped(g[0]), mapped(g[1]))
                if ng not in entries:
                    entries.append(ng)
            groups[u] = tuple(entries)
        elif d.groups.get(u):
            groups[u] = d.groups[u]

    out = make_dag(d.root, level, edges, groups, label, {})

    # Road signs.  Base edges (child is a leaf or a junction) fall into the
    # dispatch below; interior edges then take unions from above.
    base: dict[Edge, frozenset[int]] = {}
    h = out.height()
    for (u, v) in out.edges():
        if not out.is_signed_edge((u, v)):
            continue
        if out.kids.get(v) and len(out.pars[v]) == 1:
            continue  # interior: filled by propagation
        j = out.level[u]
        if j + 1 < n or (j + 1 == n and v != rep):
            base[(u, v)] = d.signs[(u, v)]
            trace.sign_cases[(u, v)] = "kept-below"
        elif j + 1 == n:  # v is the representative
            merged_signs = [d.signs[(u, w)] for w in d.kids[u] if w in squad_set]
            base[(u, v)] = frozenset().union(*merged_signs)
            trace.sign_cases[(u, v)] = "union-at-merge"
        else:
            chain, end = out.chain_down(u)
            if end == rep:
                c = chain[-2] if len(chain) >= 2 else v
                y = d.pars[c][0]
                if len(d.pars[y]) > 1:
                    src = (u, v) if u != rep else (y, v)
                    base[(u, v)] = d.signs[src]
                    trace.sign_cases[(u, v)] = "kept-above-junction"
                else:
                    base[(u, v)] = frozenset(d.pars[y])
                    trace.sign_cases[(u, v)] = "redirect-to-grandparent"
            else:
                src = (u, v) if u != rep else (d.pars[v][0], v)
                base[(u, v)] = d.signs[src]
                trace.sign_cases[(u, v)] = "kept-above"
    out.signs.update(propagate_signs(out, base))
    return out, trace


def collapse_level(d: DagDeduction, n: int,
                   choose: Callable[[Iterable[int]], int] = min,
                   traces: Optional[list[CollapseTrace]] = None) -> DagDeduction:
    """Merge every repeated formula on level ``n``, one formula at a time."""
    for text in sorted({d.label[u].text for u in d.level_vertices(n)}):
        squad = [u for u in d.level_vertices(n) if d.label[u].text == text]
        if len(squad) < 2:
            continue
        d, trace = collapse_same_formula(d, n, d.label[squad[0]], choose(squad))
        if traces is not None:
            traces.append(trace)
    return d


def compress(t, choose: Callable[[Iterable[int]], int] = min,
             traces: Optional[list[CollapseTrace]] = None) -> DagDeduction:
    """Bottom-up level-by-level compression of a uniform-height tree.

    Accepts a deduction tree or an already-converted tree-shaped dag.  The
    result is level-compressed: distinct vertices on a level carry distinct
    formulas, so its size is at most height x foundation.
    """
    d = from_tree(t) if isinstance(t, nd.NDTree) else t
    for u in d.vertices:
        if u != d.root and len(d.pars[u]) != 1:
            raise StructureError("compress expects a tree-shaped input")
    for n in range(1, d.height() + 1):
        d = collapse_level(d, n, choose, traces)
    return d
