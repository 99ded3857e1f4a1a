"""Rooted dag deductions with per-level structure.

A deduction dag has a single root at level 0, edges running from a vertex
to its children one level up, and all leaves on the top level.  Every
non-leaf vertex carries a premise grouping over its children (singletons
for repetition/introduction premises, ordered pairs for elimination
premises), and branching edges carry *road signs*: sets of grandparent
vertices that steer descending threads at the junction below.

Vertices are integers.  ``groups`` entries are either a vertex id
(singleton premise) or an ``(x, y)`` pair (minor, major elimination
premises).  ``signs`` maps an edge ``(u, v)`` to a frozenset of vertices,
and is defined exactly on the edges whose downward chain from ``u`` meets
a multi-parent vertex before the root.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional

from .formula import Formula, imp_count
from .metrics import MetricsReport
from . import ndtree as nd

Entry = object  # int | tuple[int, int]
Edge = tuple[int, int]


class StructureError(ValueError):
    """A dag violates the basic shape assumptions of this module."""


class ThreadLimitExceeded(RuntimeError):
    """Thread enumeration exceeded its configured cap."""


class DagDeduction:
    """Immutable-by-convention dag deduction; use the module constructors."""

    __slots__ = ("root", "level", "kids", "pars", "groups", "label", "signs",
                 "_chain_cache", "_levels_cache")

    def __init__(self, root: int, level: dict[int, int],
                 kids: dict[int, tuple[int, ...]],
                 pars: dict[int, tuple[int, ...]],
                 groups: dict[int, tuple[Entry, ...]],
                 label: dict[int, Formula],
                 signs: dict[Edge, frozenset[int]]):
        self.root = root
        self.level = level
        self.kids = kids
        self.pars = pars
        self.groups = groups
        self.label = label
        self.signs = signs
        self._chain_cache: dict[int, tuple[tuple[int, ...], int]] = {}
        self._levels_cache: Optional[dict[int, list[int]]] = None

    # -- basic views ------------------------------------------------------

    @property
    def vertices(self) -> Iterable[int]:
        return self.level.keys()

    def height(self) -> int:
        return max(self.level.values())

    def leaves(self) -> list[int]:
        return [u for u in self.level if not self.kids.get(u)]

    def edges(self) -> Iterator[Edge]:
        for u, cs in self.kids.items():
            for v in cs:
                yield (u, v)

    def levels(self) -> dict[int, list[int]]:
        if self._levels_cache is None:
            out: dict[int, list[int]] = {}
            for u, h in self.level.items():
                out.setdefault(h, []).append(u)
            for vs in out.values():
                vs.sort()
            self._levels_cache = out
        return self._levels_cache

    def level_vertices(self, n: int) -> list[int]:
        return self.levels().get(n, [])

    def top_edges(self) -> list[Edge]:
        h = self.height()
        return [(u, v) for (u, v) in self.edges() if self.level[v] == h]

    def size(self) -> int:
        return len(self.level)

    # -- chains and signed edges ------------------------------------------

    def chain_down(self, u: int) -> tuple[tuple[int, ...], int]:
        """Maximal descending chain from ``u`` through single-parent vertices.

        Returns ``(chain, end)`` where ``chain[0] is u``, every interior
        element has exactly one parent, and ``end = chain[-1]`` is the first
        vertex with parent count != 1 (a junction, or the root).
        """
        hit = self._chain_cache.get(u)
        if hit is not None:
            return hit
        chain = [u]
        cur = u
        while len(self.pars.get(cur, ())) == 1:
            cur = self.pars[cur][0]
            chain.append(cur)
        out = (tuple(chain), cur)
        self._chain_cache[u] = out
        return out

    def junction_below(self, u: int) -> int:
        return self.chain_down(u)[1]

    def is_signed_edge(self, e: Edge) -> bool:
        """Edges whose sign is meaningful: the chain below ends off-root."""
        return self.junction_below(e[0]) != self.root

    def singleton_entries(self, u: int) -> set[int]:
        return {g for g in self.groups.get(u, ()) if isinstance(g, int)}

    def intro_formula(self, u: int, v: int) -> Optional[Formula]:
        """The formula discharged when a thread steps from ``v`` down to ``u``.

        Non-None exactly when ``v`` is a singleton premise of ``u`` and the
        label of ``u`` is ``a -> label(v)``.
        """
        fu, fv = self.label[u], self.label[v]
        if fu.is_var or fu.right is not fv or fu is fv:
            return None
        if v in self.singleton_entries(u):
            return fu.left
        return None


def make_dag(root: int, level: dict[int, int], edges: Iterable[Edge],
             groups: dict[int, tuple[Entry, ...]], label: dict[int, Formula],
             signs: dict[Edge, frozenset[int]]) -> DagDeduction:
    """Assemble a dag, deriving ordered child/parent maps from the edge set."""
    kids: dict[int, list[int]] = {u: [] for u in level}
    pars: dict[int, list[int]] = {u: [] for u in level}
    for (u, v) in set(edges):
        if u not in level or v not in level:
            raise StructureError(f"edge ({u},{v}) mentions an unknown vertex")
        kids[u].append(v)
        pars[v].append(u)
    return DagDeduction(
        root, dict(level),
        {u: tuple(sorted(cs)) for u, cs in kids.items()},
        {u: tuple(sorted(ps)) for u, ps in pars.items()},
        dict(groups), dict(label), dict(signs),
    )


# -- conversion from / to trees -------------------------------------------


def from_tree(t: nd.NDTree) -> DagDeduction:
    """Convert a uniform-height deduction tree to dag form (no signs needed)."""
    level: dict[int, int] = {0: 0}
    label: dict[int, Formula] = {0: t.formula}
    groups: dict[int, tuple[Entry, ...]] = {}
    edges: list[Edge] = []
    h = nd.tree_height(t)
    counter = 1

    stack = [[t, 0, 0, []]]  # node, depth, own id, assigned child ids
    while stack:
        node, depth, vid, child_ids = stack[-1]
        if len(child_ids) < len(node.children):
            c = node.children[len(child_ids)]
            cid = counter
            counter += 1
            level[cid] = depth + 1
            label[cid] = c.formula
            edges.append((vid, cid))
            child_ids.append(cid)
            stack.append([c, depth + 1, cid, []])
            continue
        stack.pop()
        if node.children:
            entries: list[Entry] = []
            for g in nd.node_groups(node):
                if g[0] == "one":
                    entries.append(child_ids[g[1]])
                else:
                    entries.append((child_ids[g[1]], child_ids[g[2]]))
            groups[vid] = tuple(entries)
        elif depth != h:
            raise StructureError("tree is not uniform height; pad it first")
    return make_dag(0, level, edges, groups, label, {})


def to_tree(d: DagDeduction) -> nd.NDTree:
    """Convert a tree-shaped dag back to an annotated deduction tree."""
    for u in d.vertices:
        if u != d.root and len(d.pars[u]) != 1:
            raise StructureError("dag is not tree-shaped")

    labels = {}
    next_label = [1]

    def intro_label(u: int) -> int:
        if u not in labels:
            labels[u] = next_label[0]
            next_label[0] += 1
        return labels[u]

    def build(u: int, closers: dict[Formula, int]) -> nd.NDTree:
        entries = d.groups.get(u, ())
        f = d.label[u]
        if not entries:
            lab = closers.get(f)
            return nd.assumption(f, discharge=lab)
        singles = [g for g in entries if isinstance(g, int)]
        pairs = [g for g in entries if not isinstance(g, int)]
        intro_here = any(d.intro_formula(u, v) is not None for v in singles)
        sub_closers = closers
        lab = None
        if intro_here:
            lab = intro_label(u)
            sub_closers = dict(closers)
            sub_closers[f.left] = lab
        built: dict[int, nd.NDTree] = {}
        for v in singles:
            # Only introduction premises sit under the discharge.
            env = sub_closers if d.intro_formula(u, v) is not None else closers
            built[v] = build(v, env)
        for (x, y) in pairs:
            built.setdefault(x, build(x, closers))
            built.setdefault(y, build(y, closers))
        if len(entries) == 1:
            g = entries[0]
            if isinstance(g, int):
                if d.intro_formula(u, g) is not None:
                    return nd.intro(f, built[g], label=lab)
                return nd.rep(f, built[g])
            return nd.elim(f, built[g[0]], built[g[1]])
        child_ids: list[int] = []
        group_specs: list[tuple] = []
        for g in entries:
            if isinstance(g, int):
                child_ids.append(g)
                group_specs.append(("one", len(child_ids) - 1))
            else:
                child_ids.extend(g)
                group_specs.append(("two", len(child_ids) - 2, len(child_ids) - 1))
        kids = tuple(built[v] for v in child_ids)
        return nd.NDTree(f, nd.MULTI, kids, label=lab, groups=tuple(group_specs))

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * (d.height() + 10)))
    try:
        return build(d.root, {})
    finally:
        sys.setrecursionlimit(old)


# -- local correctness ------------------------------------------------------


def check_structure(d: DagDeduction) -> list[str]:
    """Shape checks: single root, level-respecting edges, uniform top leaves."""
    out = []
    roots = [u for u in d.vertices if not d.pars.get(u)]
    if roots != [d.root]:
        out.append(f"parentless vertices {roots} do not match the root {d.root}")
    if d.level.get(d.root) != 0:
        out.append("root is not at level 0")
    h = d.height()
    for (u, v) in d.edges():
        if d.level[v] != d.level[u] + 1:
            out.append(f"edge ({u},{v}) skips levels")
    for u in d.vertices:
        if not d.kids.get(u) and d.level[u] != h:
            out.append(f"leaf {u} sits below the top level")
    return out


def check_local_correctness(d: DagDeduction) -> list[str]:
    """All local conditions on groups, labels and signs; [] means ok."""
    out = check_structure(d)
    if out:
        return out
    for u in d.vertices:
        cs = d.kids.get(u, ())
        entries = d.groups.get(u, ())
        if not cs:
            if entries:
                out.append(f"leaf {u} has premise groups")
            continue
        mentioned: set[int] = set()
        fu = d.label[u]
        for g in entries:
            if isinstance(g, int):
                mentioned.add(g)
                fx = d.label.get(g)
                if g not in cs:
                    out.append(f"group entry {g} of {u} is not a child")
                elif fx is not fu and (fu.is_var or fu.right is not fx):
                    out.append(f"singleton child {g} of {u} is neither repetition "
                               f"nor introduction premise")
            else:
                x, y = g
                mentioned.update(g)
                if x not in cs or y not in cs:
                    out.append(f"pair {g} of {u} mentions non-children")
                    continue
                fy, fx = d.label[y], d.label[x]
                if fy.is_var or fy.left is not fx or fy.right is not fu:
                    out.append(f"pair {g} of {u} is not an elimination pair")
        if mentioned != set(cs):
            out.append(f"groups of {u} cover {sorted(mentioned)}, children are {sorted(cs)}")

    h = d.height()
    for (u, v) in d.edges():
        signed = d.is_signed_edge((u, v))
        sign = d.signs.get((u, v))
        if not signed:
            if sign is not None:
                out.append(f"edge ({u},{v}) carries a sign but its chain ends at the root")
            continue
        if sign is None or not sign:
            out.append(f"branching edge ({u},{v}) lacks a nonempty sign")
            continue
        end = d.junction_below(u)
        if not sign <= set(d.pars[end]):
            out.append(f"sign of ({u},{v}) is not a set of parents of junction {end}")
    # Conjugate pairs share signs; single-parent interiors take unions.
    for u in d.vertices:
        for g in d.groups.get(u, ()):
            if not isinstance(g, int):
                x, y = g
                if d.signs.get((u, x)) != d.signs.get((u, y)):
                    out.append(f"pair ({x},{y}) under {u} has unequal signs")
    for (u, v) in d.edges():
        if not d.is_signed_edge((u, v)):
            continue
        if d.kids.get(v) and len(d.pars[v]) == 1:
            want = frozenset().union(*(d.signs.get((v, z), frozenset())
                                       for z in d.kids[v]))
            if d.signs.get((u, v)) != want:
                out.append(f"sign of ({u},{v}) is not the union of the signs above {v}")
    # Junction coverage: every parent of a non-leaf junction is reachable.
    for u in d.vertices:
        if len(d.pars.get(u, ())) > 1 and d.kids.get(u):
            covered = frozenset().union(*(d.signs.get((u, v), frozenset())
                                          for v in d.kids[u]))
            missing = set(d.pars[u]) - covered
            if missing:
                out.append(f"junction {u} has uncovered parents {sorted(missing)}")
    return out


# -- threads and plain open assumptions -------------------------------------


def threads(d: DagDeduction, edge: Edge, target: int,
            cap: int = 1_000_000) -> list[tuple[int, ...]]:
    """All descending threads from ``edge`` to ``target``.

    A thread steps from child to parent; at a multi-parent vertex it may
    only continue to a parent listed in the sign of the edge by which it
    left the previous junction (initially ``edge`` itself).
    """
    out: list[tuple[int, ...]] = []
    budget = [cap]
    u, v = edge

    def walk(path: list[int], cur: int, sign_edge: Edge) -> None:
        budget[0] -= 1
        if budget[0] < 0:
            raise ThreadLimitExceeded(f"thread cap {cap} exceeded")
        if cur == target:
            out.append(tuple(path))
            return
        ps = d.pars.get(cur, ())
        if not ps:
            return
        if len(ps) == 1:
            path.append(ps[0])
            walk(path, ps[0], sign_edge)
            path.pop()
            return
        for w in sorted(d.signs.get(sign_edge, frozenset())):
            path.append(w)
            walk(path, w, (w, cur))
            path.pop()

    walk([v, u], u, edge)
    return out


def _open_thread_exists(d: DagDeduction, edge: Edge, alpha: Formula,
                        budget: list[int], cap: int) -> bool:
    """Is there a thread from ``edge`` to the root avoiding every
    introduction of ``alpha``?  Plain enumeration with a work cap."""
    u, v = edge

    def walk(cur_child: int, cur: int, sign_edge: Edge) -> bool:
        budget[0] -= 1
        if budget[0] < 0:
            raise ThreadLimitExceeded(f"thread cap {cap} exceeded")
        if d.intro_formula(cur, cur_child) is alpha:
            return False
        ps = d.pars.get(cur, ())
        if not ps:
            return True
        if len(ps) == 1:
            return walk(cur, ps[0], sign_edge)
        return any(walk(cur, w, (w, cur))
                   for w in d.signs.get(sign_edge, frozenset()))

    return walk(v, u, edge)


def open_assumptions(d: DagDeduction, cap: int = 1_000_000) -> frozenset[Formula]:
    """Leaf formulas with some root thread avoiding their introduction."""
    out: set[Formula] = set()
    budget = [cap]
    for (u, v) in d.top_edges():
        alpha = d.label[v]
        if alpha in out:
            continue
        if _open_thread_exists(d, (u, v), alpha, budget, cap):
            out.add(alpha)
    return frozenset(out)


# -- metrics, canonical form, DOT -------------------------------------------


def dag_metrics(d: DagDeduction) -> MetricsReport:
    formulas = set(d.label.values())
    return MetricsReport(
        height=d.height(),
        foundation=len(formulas),
        max_arrows=max(imp_count(f) for f in formulas),
        size=d.size(),
        weight=sum(len(f.text) for f in d.label.values()),
    )


def compressed_key(d: DagDeduction):
    """Canonical form for fully level-compressed dags.

    In such dags (level, formula) identifies a vertex, so the key is the
    relabelled vertex/edge/group/sign structure; two compression runs with
    different representative choices agree on it.
    """
    names: dict[int, tuple[int, str]] = {}
    used: set[tuple[int, str]] = set()
    for u in d.vertices:
        name = (d.level[u], d.label[u].text)
        if name in used:
            raise StructureError("dag is not level-compressed; key undefined")
        used.add(name)
        names[u] = name

    def entry_key(g):
        if isinstance(g, int):
            return ("one", names[g])
        return ("two", names[g[0]], names[g[1]])

    return (
        names[d.root],
        tuple(sorted((names[u], names[v]) for (u, v) in d.edges())),
        tuple(sorted((names[u], tuple(sorted(entry_key(g) for g in gs)))
                     for u, gs in d.groups.items() if gs)),
        tuple(sorted((names[u], names[v], tuple(sorted(names[w] for w in sign)))
                     for (u, v), sign in d.signs.items())),
    )


def to_dot(d: DagDeduction, title: str = "deduction") -> str:
    """Graphviz rendering: vertex formulas, pair/singleton edge styles, signs."""
    lines = [f'digraph "{title}" {{', "  rankdir=BT;"]
    for u in sorted(d.vertices):
        lines.append(f'  n{u} [label="{u}: {d.label[u].text}"];')
    for (u, v) in sorted(d.edges()):
        attrs = []
        sign = d.signs.get((u, v))
        if sign:
            attrs.append(f'label="{{{",".join(str(w) for w in sorted(sign))}}}"')
        if any(not isinstance(g, int) and v in g for g in d.groups.get(u, ())):
            attrs.append("style=solid")
        else:
            attrs.append("style=dashed")
        lines.append(f'  n{v} -> n{u} [{" ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines)


def propagate_signs(d: DagDeduction, base: dict[Edge, frozenset[int]]) -> dict[Edge, frozenset[int]]:
    """Extend base signs (on leaf/junction-child edges) to interior edges.

    Interior signed edges (single-parent, non-leaf child) take the union of
    the signs on the child's outgoing edges, computed from the top down.
    """
    signs = dict(base)
    h = d.height()
    for lvl in range(h - 1, -1, -1):
        for u in d.level_vertices(lvl):
            for v in d.kids.get(u, ()):
                if (u, v) in signs:
                    continue
                if not d.is_signed_edge((u, v)):
                    continue
                if d.kids.get(v) and len(d.pars[v]) == 1:
                    signs[(u, v)] = frozenset().union(
                        *(signs.get((v, z), frozenset()) for z in d.kids[v]))
    return signs
