"""Dag-to-tree unfolding: split shared vertices level by level, top down.

Unfolding a multi-parent vertex clones its (tree) subgraph once per parent
and prunes each clone to the branches whose road signs admit that parent,
so every thread of the original survives in exactly one clone.  Running
this from the top level down to level one turns any well-formed dag
deduction back into a tree whose open assumptions are among the dag's.
"""

from __future__ import annotations

from typing import Optional

from . import ndtree as nd
from .dag import (DagDeduction, Edge, Entry, StructureError, make_dag,
                  propagate_signs, to_tree)


class NodeCapExceeded(RuntimeError):
    """Unfolding would create more vertices than the configured cap."""


def unfold_vertex(d: DagDeduction, n: int, r: int,
                  cap: int = 1_000_000) -> DagDeduction:
    """Split the level-``n`` vertex ``r`` into one pruned copy per parent.

    Requires the subgraphs above level ``n`` to be disjoint trees.  Identity
    when ``r`` has a single parent.
    """
    if d.level.get(r) != n:
        raise StructureError(f"{r} is not a level-{n} vertex")
    for u in d.vertices:
        if d.level[u] > n and len(d.pars[u]) != 1:
            raise StructureError(f"level {n} does not root disjoint subtrees")
    parents = d.pars[r]
    if len(parents) <= 1:
        return d

    sub: list[int] = []
    stack = [r]
    while stack:
        u = stack.pop()
        sub.append(u)
        stack.extend(d.kids.get(u, ()))
    sub_set = set(sub)

    if len(d.level) + len(parents) * len(sub) > cap + len(sub):
        raise NodeCapExceeded(f"unfolding cap {cap} exceeded")

    level = {u: h for u, h in d.level.items() if u not in sub_set}
    label = {u: f for u, f in d.label.items() if u not in sub_set}
    edges = [(u, v) for (u, v) in d.edges()
             if u not in sub_set and v not in sub_set]
    groups: dict[int, tuple[Entry, ...]] = {
        u: gs for u, gs in d.groups.items() if u not in sub_set and u not in parents}

    next_id = max(d.level) + 1
    base_signs: dict[Edge, frozenset[int]] = {
        (u, v): s for (u, v), s in d.signs.items()
        if u not in sub_set and v not in sub_set}

    copy_root: dict[int, int] = {}
    origin: dict[int, int] = {}
    for eps in parents:
        ids: dict[int, int] = {}
        # Walk the subtree, keeping a child only when the sign of the edge
        # above it admits this parent.
        walk = [r]
        ids[r] = next_id
        next_id += 1
        while walk:
            u = walk.pop()
            nu = ids[u]
            level[nu] = d.level[u]
            label[nu] = d.label[u]
            origin[nu] = u
            kept: list[int] = []
            for v in d.kids.get(u, ()):
                if eps in d.signs.get((u, v), frozenset()):
                    ids[v] = next_id
                    next_id += 1
                    kept.append(v)
                    edges.append((nu, ids[v]))
                    walk.append(v)
            if d.kids.get(u, ()):
                if not kept:
                    raise StructureError(
                        f"pruning for parent {eps} removed every premise of {u}")
                entries: list[Entry] = []
                for g in d.groups.get(u, ()):
                    if isinstance(g, int):
                        if g in ids and g in kept:
                            entries.append(ids[g])
                    else:
                        a, b = g
                        if (a in kept) != (b in kept):
                            raise StructureError(
                                f"pruning split the elimination pair {g} of {u}")
                        if a in kept:
                            entries.append((ids[a], ids[b]))
                groups[nu] = tuple(entries)
        copy_root[eps] = ids[r]
        edges.append((eps, ids[r]))
        if len(level) > cap:
            raise NodeCapExceeded(f"unfolding cap {cap} exceeded")

    for eps in parents:
        entries = []
        for g in d.groups.get(eps, ()):
            if isinstance(g, int):
                entries.append(copy_root[eps] if g == r else g)
            else:
                entries.append(tuple(copy_root[eps] if x == r else x for x in g))
        groups[eps] = tuple(entries)

    out = make_dag(d.root, level, edges, groups, label, {})

    # Signs for base edges touched by the unfolding: every leaf edge inside
    # a clone, and the edge into a clone root when that root is a leaf,
    # inherits the sign of the old edge from the clone's parent into r.
    for eps in parents:
        inherit = d.signs.get((eps, r))
        stack2 = [copy_root[eps]]
        while stack2:
            u = stack2.pop()
            for v in out.kids.get(u, ()):
                stack2.append(v)
                if not out.kids.get(v) and out.is_signed_edge((u, v)):
                    if inherit is None:
                        raise StructureError(
                            f"missing sign for ({eps},{r}) needed inside its clone")
                    base_signs[(u, v)] = inherit
        e = (eps, copy_root[eps])
        if not out.kids.get(copy_root[eps]) and out.is_signed_edge(e):
            base_signs[e] = inherit if inherit is not None else frozenset()
    # Drop stale base entries whose edges are now interior or unsigned.
    base = {e: s for e, s in base_signs.items()
            if e in set(out.edges()) and out.is_signed_edge(e)
            and (not out.kids.get(e[1]) or len(out.pars[e[1]]) > 1)}
    out.signs.update(propagate_signs(out, base))
    return out


def unfold_level(d: DagDeduction, n: int, cap: int = 1_000_000) -> DagDeduction:
    """Unfold every multi-parent vertex on level ``n``."""
    for r in list(d.level_vertices(n)):
        if r in d.level and len(d.pars.get(r, ())) > 1:
            d = unfold_vertex(d, n, r, cap)
    return d


def unfold_to_dag(d: DagDeduction, cap: int = 1_000_000) -> DagDeduction:
    """Full unfolding, from the top level down; the result is tree-shaped."""
    for n in range(d.height(), 0, -1):
        d = unfold_level(d, n, cap)
    return d


def unfold(d: DagDeduction, cap: int = 1_000_000) -> nd.NDTree:
    """Unfold to a deduction tree with discharge annotations."""
    return to_tree(unfold_to_dag(d, cap))
